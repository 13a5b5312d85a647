#include "qsat/hamiltonian.hpp"

#include <algorithm>
#include <functional>

namespace qsat {

void Hamiltonian::add_vertex(const VertexId& v) { vertices_.insert(v); }

void Hamiltonian::add_two_spin(const VertexId& u, const VertexId& v, const Matrix4& op) {
  if (u == v) fail(ErrorCode::InvalidInput, "self-loop edge " + u);
  Edge e(u, v);
  Matrix4 canonical = (u == e.a) ? op : swap_sides(op);
  auto it = two_spin_.find(e);
  if (it == two_spin_.end())
    two_spin_[e] = canonical;
  else
    it->second += canonical;
  vertices_.insert(e.a);
  vertices_.insert(e.b);
}

void Hamiltonian::add_single_spin(const VertexId& v, const Matrix2& op) {
  auto it = single_spin_.find(v);
  if (it == single_spin_.end())
    single_spin_[v] = op;
  else
    it->second += op;
  vertices_.insert(v);
}

double Hamiltonian::drop_threshold() const { return default_tols().rank; }

void Hamiltonian::finalize(Normalize mode) {
  for (auto it = two_spin_.begin(); it != two_spin_.end();) {
    require_hermitian(it->second);
    Matrix4 op = symmetrized(it->second);
    if (mode == Normalize::yes) op = rescale_to_zero_ground(op);
    if (operator_norm(op) <= drop_threshold()) {
      it = two_spin_.erase(it);
    } else {
      it->second = op;
      ++it;
    }
  }
  for (auto it = single_spin_.begin(); it != single_spin_.end();) {
    require_hermitian(it->second);
    Matrix2 op = symmetrized(it->second);
    if (mode == Normalize::yes) op = rescale_to_zero_ground(op);
    if (operator_norm(op) <= drop_threshold()) {
      it = single_spin_.erase(it);
    } else {
      it->second = op;
      ++it;
    }
  }
}

std::set<Edge> Hamiltonian::edges() const {
  std::set<Edge> e;
  for (const auto& [edge, op] : two_spin_) e.insert(edge);
  return e;
}

std::set<VertexId> Hamiltonian::neighbors(const VertexId& v) const {
  std::set<VertexId> out;
  for (const auto& [edge, op] : two_spin_)
    if (edge.contains(v)) out.insert(edge.other(v));
  return out;
}

void Hamiltonian::set_two_spin(const Edge& e, const Matrix4& op) { two_spin_[e] = op; }

void Hamiltonian::remove_two_spin(const Edge& e) { two_spin_.erase(e); }

void Hamiltonian::set_single_spin(const VertexId& v, const Matrix2& op) { single_spin_[v] = op; }

void Hamiltonian::remove_single_spin(const VertexId& v) { single_spin_.erase(v); }

void Hamiltonian::remove_vertex(const VertexId& v) {
  if (single_spin_.count(v)) fail(ErrorCode::InvalidInput, "vertex still carries a term: " + v);
  for (const auto& [edge, op] : two_spin_)
    if (edge.contains(v)) fail(ErrorCode::InvalidInput, "vertex still carries a term: " + v);
  vertices_.erase(v);
}

Matrix4 swap_sides(const Matrix4& op) {
  Matrix4 out;
  auto sw = [](int i) { return ((i & 1) << 1) | (i >> 1); };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(sw(r), sw(c)) = op(r, c);
  return out;
}

ComplexMatrix rescale_to_zero_ground(const ComplexMatrix& op) {
  require_hermitian(op);
  RealVector w = eigh_values(op);
  return symmetrized(op) - w(0) * ComplexMatrix::Identity(op.rows(), op.cols());
}

void require_rescaled(const ComplexMatrix& op, double tau_rank) {
  RealVector w = eigh_values(op);
  double norm = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  if (std::abs(w(0)) > tau_rank * norm)
    fail(ErrorCode::NotRescaled, "term has nonzero ground energy");
}

Matrix4 projectorize(const Matrix4& op, double tau_rank) {
  require_hermitian(op);
  require_rescaled(op, tau_rank);
  return image_projector(op, tau_rank);
}

TermNaturality classify_naturality(const Matrix4& op, double tau_rank) {
  require_hermitian(op);
  require_rescaled(op, tau_rank);
  TermNaturality result;
  EighResult es = eigh(op);
  const double norm = std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(3)));
  std::vector<Vector4> image;
  for (int k = 0; k < 4; ++k)
    if (std::abs(es.eigenvalues(k)) > tau_rank * norm) image.push_back(es.eigenvectors.col(k));
  result.rank = static_cast<int>(image.size());

  switch (result.rank) {
    case 0:
      result.natural = false;
      break;
    case 1: {
      result.natural = !is_product_state(image[0], tau_rank);
      if (result.natural) result.witness = phase_fixed(image[0]);
      break;
    }
    default: {
      // Rank 2: product operators |phi><phi| (x) eta are exactly the terms
      // whose images carry no entangled vector. Rank 3 always qualifies.
      auto found = most_entangled_in_span(image);
      bool has_entangled = found.det_value > tau_rank;
      if (result.rank == 2) {
        result.natural = !is_product_operator(op, tau_rank) && has_entangled;
      } else {
        result.natural = true;
      }
      if (result.natural) result.witness = phase_fixed(found.vector);
      break;
    }
  }
  return result;
}

NaturalityReport naturality_report(const Hamiltonian& h) {
  NaturalityReport report;
  for (const auto& [edge, op] : h.two_spin_terms()) {
    NaturalityReport::Entry entry;
    entry.edge = edge;
    entry.verdict = classify_naturality(op);
    report.all_terms_natural = report.all_terms_natural && entry.verdict.natural;
    report.terms.push_back(std::move(entry));
  }
  report.connected = connected_components(h).size() <= 1;
  return report;
}

SubstitutedTerm substitute_nonnatural_rank2(const Matrix4& op, double tau_rank) {
  TermNaturality c = classify_naturality(op, tau_rank);
  if (c.natural || c.rank != 2)
    fail(ErrorCode::NotApplicable, "substitution applies to non-natural rank-2 terms only");
  auto factors = product_operator_factors(op, tau_rank);
  if (!factors) fail(ErrorCode::NotApplicable, "term does not factor");
  SubstitutedTerm s;
  int rank_left = operator_rank(factors->left, tau_rank);
  const Matrix2& rank1 = (rank_left == 1) ? factors->left : factors->right;
  s.slot = (rank_left == 1) ? 0 : 1;
  s.op = rank1 / rank1.trace().real();  // PSD rank-1 scaled to a projector
  return s;
}

ValidationReport validate(const Hamiltonian& h) {
  ValidationReport r;
  for (const auto& [edge, op] : h.two_spin_terms()) {
    if (!is_hermitian(op)) {
      r.hermitian_ok = false;
      r.errors.push_back("non-Hermitian term on edge (" + edge.a + "," + edge.b + ")");
    }
    RealVector w = eigh_values(symmetrized(op));
    double norm = std::max(std::abs(w(0)), std::abs(w(3)));
    if (std::abs(w(0)) > default_tols().rank * norm) {
      r.psd_ok = false;
      r.errors.push_back("term not rescaled to zero ground energy on edge (" + edge.a + "," +
                         edge.b + ")");
    }
    if (!h.has_vertex(edge.a) || !h.has_vertex(edge.b)) {
      r.structure_ok = false;
      r.errors.push_back("term references missing vertex on edge (" + edge.a + "," + edge.b + ")");
    }
  }
  for (const auto& [v, op] : h.single_spin_terms()) {
    if (!is_hermitian(op)) {
      r.hermitian_ok = false;
      r.errors.push_back("non-Hermitian single-spin term on " + v);
    }
    if (!h.has_vertex(v)) {
      r.structure_ok = false;
      r.errors.push_back("single-spin term references missing vertex " + v);
    }
  }
  auto components = connected_components(h);
  if (components.size() > 1) {
    r.connected = false;
    r.warnings.push_back("isolated subsystems: interaction graph has " +
                         std::to_string(components.size()) + " components");
  }
  return r;
}

std::vector<std::set<VertexId>> connected_components(const Hamiltonian& h) {
  std::map<VertexId, VertexId> parent;
  for (const auto& v : h.vertices()) parent[v] = v;
  std::function<VertexId(const VertexId&)> find = [&](const VertexId& v) -> VertexId {
    VertexId root = v;
    while (parent[root] != root) root = parent[root];
    VertexId cur = v;
    while (parent[cur] != root) {
      VertexId next = parent[cur];
      parent[cur] = root;
      cur = next;
    }
    return root;
  };
  for (const auto& [edge, op] : h.two_spin_terms()) parent[find(edge.a)] = find(edge.b);

  std::map<VertexId, std::set<VertexId>> groups;
  for (const auto& v : h.vertices()) groups[find(v)].insert(v);
  std::vector<std::set<VertexId>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace qsat
