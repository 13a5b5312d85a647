#include "qsat/reduction.hpp"

#include <algorithm>
#include <map>

#include "qsat/rng.hpp"

namespace qsat {

namespace {

using Matrix8 = Eigen::Matrix<Complex, 8, 8>;

Vector4 swap_vec(const Vector4& v) {
  Vector4 out;
  out << v(0), v(2), v(1), v(3);
  return out;
}

// Unit vector of a rank-1 PSD term.
Vector4 term_vector(const Matrix4& op) {
  EighResult es = eigh(op);
  return phase_fixed(es.eigenvectors.col(3));
}

// Stored operators sit on canonical edges; orient so `first` is the left slot.
Matrix4 oriented(const Matrix4& op, const Edge& e, const VertexId& first) {
  return first == e.a ? op : swap_sides(op);
}

Vector4 oriented_vector(const Matrix4& op, const Edge& e, const VertexId& first) {
  Vector4 beta = term_vector(op);
  return first == e.a ? beta : swap_vec(beta);
}

// Orthonormal psi0/psi1 with ker(term) inside their span. psi1 is made as
// entangled as the span allows (maximal second Schmidt coefficient).
std::pair<Vector4, Vector4> contraction_basis(const Matrix4& term, int rank,
                                              bool require_entangled) {
  const double tau = default_tols().rank;
  if (rank == 2) {
    auto kernel = kernel_basis(term, tau);
    std::vector<Vector4> span = {Vector4(kernel[0]), Vector4(kernel[1])};
    auto best = most_entangled_in_span(span);
    if (best.det_value <= tau) {
      if (require_entangled)
        fail(ErrorCode::NoEntangledBasisVector,
             "kernel of the contracted term carries no entangled vector");
      return {span[0], span[1]};
    }
    Vector4 psi1 = phase_fixed(best.vector);
    Vector4 psi0 = span[0] - psi1.dot(span[0]) * psi1;
    if (psi0.norm() < 0.5) psi0 = span[1] - psi1.dot(span[1]) * psi1;
    psi0 = phase_fixed(Vector4(psi0 / psi0.norm()));
    return {psi0, psi1};
  }
  // rank 3: psi0 spans the kernel, psi1 lives in the excited space, which has
  // dimension 3 and therefore always contains entangled vectors.
  EighResult es = eigh(term);
  const double norm = std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(3)));
  Vector4 psi0;
  std::vector<Vector4> excited;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(es.eigenvalues(k)) <= tau * norm)
      psi0 = es.eigenvectors.col(k);
    else
      excited.push_back(es.eigenvectors.col(k));
  }
  auto best = most_entangled_in_span(excited);
  return {phase_fixed(psi0), phase_fixed(best.vector)};
}

void add_single_accumulate(std::map<VertexId, Matrix2>& singles, const VertexId& v,
                           const Matrix2& op) {
  auto it = singles.find(v);
  if (it == singles.end())
    singles[v] = op;
  else
    it->second += op;
}

void add_two_accumulate(std::map<Edge, Matrix4>& terms, const Edge& e, const Matrix4& op) {
  auto it = terms.find(e);
  if (it == terms.end())
    terms[e] = op;
  else
    it->second += op;
}

// H' = U+ H U for the recorded contraction; shared by reducer and replayer so
// traces reproduce bit-for-bit.
void apply_contraction(Hamiltonian& h, const TwoSpinContraction& c) {
  const Edge& e = c.edge;
  const VertexId& s = c.survivor;
  const ComplexMatrix& u = c.isometry;
  const double drop = h.drop_threshold();

  std::map<Edge, Matrix4> new_two;
  std::map<VertexId, Matrix2> new_single;

  for (const auto& [edge, op] : h.two_spin_terms()) {
    const bool ta = edge.contains(e.a), tb = edge.contains(e.b);
    if (!ta && !tb) {
      add_two_accumulate(new_two, edge, op);
    } else if (edge == e) {
      Matrix2 m2 = (u.adjoint() * op * u).eval();
      add_single_accumulate(new_single, s, m2);
    } else {
      // term on (p, x) with p in the contracted pair
      const VertexId p = ta ? e.a : e.b;
      const VertexId x = edge.other(p);
      Matrix4 op_px = oriented(op, edge, p);
      const int pos_p = (p == e.a) ? 0 : 1;

      // Lift to (e.a, e.b, x), conjugate by U (x) 1.
      Matrix8 m3 = Matrix8::Zero();
      for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
          for (int ix = 0; ix < 2; ++ix)
            for (int ja = 0; ja < 2; ++ja)
              for (int jb = 0; jb < 2; ++jb)
                for (int jx = 0; jx < 2; ++jx) {
                  int ip = pos_p == 0 ? ia : ib;
                  int io = pos_p == 0 ? ib : ia;
                  int jp = pos_p == 0 ? ja : jb;
                  int jo = pos_p == 0 ? jb : ja;
                  if (io != jo) continue;
                  m3(4 * ia + 2 * ib + ix, 4 * ja + 2 * jb + jx) = op_px(2 * ip + ix, 2 * jp + jx);
                }
      Eigen::Matrix<Complex, 8, 4> w = Eigen::Matrix<Complex, 8, 4>::Zero();
      for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
          for (int ks = 0; ks < 2; ++ks)
            for (int kx = 0; kx < 2; ++kx)
              w(4 * ia + 2 * ib + kx, 2 * ks + kx) = u(2 * ia + ib, ks);
      Matrix4 conj4 = (w.adjoint() * m3 * w).eval();

      Edge enew(s, x);
      Matrix4 canonical = (s == enew.a) ? conj4 : swap_sides(conj4);
      add_two_accumulate(new_two, enew, canonical);
    }
  }

  for (const auto& [v, op] : h.single_spin_terms()) {
    if (v == e.a || v == e.b) {
      Matrix4 lifted = (v == e.a) ? kron2(op, Matrix2::Identity()) : kron2(Matrix2::Identity(), op);
      Matrix2 m2 = (u.adjoint() * lifted * u).eval();
      add_single_accumulate(new_single, s, m2);
    } else {
      add_single_accumulate(new_single, v, op);
    }
  }

  Hamiltonian out;
  for (const auto& v : h.vertices())
    if (v != c.removed) out.add_vertex(v);
  for (const auto& [edge, op] : new_two)
    if (operator_norm(op) > drop) out.set_two_spin(edge, op);
  for (const auto& [v, op] : new_single)
    if (operator_norm(op) > drop) out.set_single_spin(v, op);
  h = std::move(out);
}

// H' = (<psi| (x) 1) H (|psi> (x) 1), deleting the pinned spin.
void apply_deletion(Hamiltonian& h, const SpinDeletion& d) {
  const VertexId& v = d.vertex;
  const Vector2& psi = d.state;
  const double drop = h.drop_threshold();

  std::map<Edge, Matrix4> new_two;
  std::map<VertexId, Matrix2> new_single;

  for (const auto& [edge, op] : h.two_spin_terms()) {
    if (!edge.contains(v)) {
      add_two_accumulate(new_two, edge, op);
      continue;
    }
    const VertexId other = edge.other(v);
    Matrix2 m2 = Matrix2::Zero();
    if (v == edge.a) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              m2(i, j) += std::conj(psi(k)) * op(2 * k + i, 2 * l + j) * psi(l);
    } else {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              m2(i, j) += std::conj(psi(k)) * op(2 * i + k, 2 * j + l) * psi(l);
    }
    add_single_accumulate(new_single, other, m2);
  }

  for (const auto& [w, op] : h.single_spin_terms())
    if (w != v) add_single_accumulate(new_single, w, op);

  Hamiltonian out;
  for (const auto& w : h.vertices())
    if (w != v) out.add_vertex(w);
  for (const auto& [edge, op] : new_two)
    if (operator_norm(op) > drop) out.set_two_spin(edge, op);
  for (const auto& [w, op] : new_single)
    if (operator_norm(op) > drop) out.set_single_spin(w, op);
  h = std::move(out);
}

void apply_substitution(Hamiltonian& h, const Substitution& s) {
  h.remove_two_spin(s.edge);
  Matrix2 acc = s.op;
  auto it = h.single_spin_terms().find(s.vertex);
  if (it != h.single_spin_terms().end()) acc += it->second;
  h.set_single_spin(s.vertex, acc);
}

void apply_accumulation(Hamiltonian& h, const TermAccumulation& t) {
  std::optional<Matrix4> existing;
  auto it = h.two_spin_terms().find(t.edge);
  if (it != h.two_spin_terms().end()) existing = it->second;
  h.set_two_spin(t.edge, accumulate_term(existing, t.beta));
}

}  // namespace

ContractionOutcome contract_two_spin(const Hamiltonian& h, const Edge& e,
                                     const std::optional<std::pair<Vector4, Vector4>>& override,
                                     bool require_entangled) {
  auto it = h.two_spin_terms().find(e);
  if (it == h.two_spin_terms().end())
    fail(ErrorCode::NoSuchTerm, "no term on edge (" + e.a + "," + e.b + ")");
  const Matrix4& term = it->second;
  int rank = operator_rank(term);
  if (rank != 2 && rank != 3)
    fail(ErrorCode::RankMismatch,
         "contraction needs rank 2 or 3, term has rank " + std::to_string(rank));

  Vector4 psi0, psi1;
  if (override) {
    psi0 = override->first;
    psi1 = override->second;
  } else {
    std::tie(psi0, psi1) = contraction_basis(term, rank, require_entangled);
  }

  ComplexMatrix u(4, 2);
  u.col(0) = psi0;
  u.col(1) = psi1;
  if ((u.adjoint() * u - Matrix2::Identity()).cwiseAbs().maxCoeff() > default_tols().norm)
    fail(ErrorCode::InvalidInput, "contraction basis is not orthonormal");

  ContractionOutcome out{h, TwoSpinContraction{e.a, e.b, e, u}};
  apply_contraction(out.h, out.step);
  return out;
}

DeletionOutcome delete_spin(const Hamiltonian& h, const VertexId& v) {
  auto it = h.single_spin_terms().find(v);
  if (it == h.single_spin_terms().end())
    fail(ErrorCode::NoSuchTerm, "no single-spin term on " + v);
  DeletionOutcome out;
  if (operator_rank(it->second) == 2) {
    out.frustrated = true;
    out.h = h;
    return out;
  }
  auto kernel = kernel_basis(it->second);
  out.step.vertex = v;
  out.step.state = Vector2(kernel[0]);
  out.h = h;
  apply_deletion(out.h, out.step);
  return out;
}

std::optional<Vector4> induce_constraint(const Vector4& beta_ab, const Vector4& beta_bc) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector4 out;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      out(2 * a + c) =
          inv_sqrt2 * (beta_ab(2 * a + 0) * beta_bc(2 * 1 + c) - beta_ab(2 * a + 1) * beta_bc(2 * 0 + c));
  double norm = out.norm();
  if (norm <= default_tols().rank) return std::nullopt;
  return phase_fixed(Vector4(out / norm));
}

Matrix4 accumulate_term(const std::optional<Matrix4>& existing, const Vector4& beta,
                        bool* colinear) {
  if (colinear) *colinear = false;
  Matrix4 added = beta * beta.adjoint();
  if (!existing) return added;
  if (operator_rank(*existing) == 1) {
    Vector4 own = term_vector(*existing);
    double fidelity = std::norm(own.dot(beta));
    if (fidelity > 1.0 - 1e-8) {
      if (colinear) *colinear = true;
      return *existing;
    }
  }
  return *existing + added;
}

ReductionResult reduce_to_complete(const Hamiltonian& input, const ReduceOptions& opts) {
  ReductionResult res;
  res.h_c = input;
  Hamiltonian& h = res.h_c;
  for (const auto& v : input.vertices()) res.network.original_vertices.push_back(v);

  CounterRng rng(opts.order_seed);
  auto is_active = [&](const VertexId& v) { return !opts.active || opts.active->count(v) > 0; };
  auto pick_index = [&](std::size_t count) -> std::size_t {
    return opts.randomize_order ? static_cast<std::size_t>(rng.next_u64() % count) : 0;
  };

  auto frustrated_single = [&](const VertexId& v) {
    res.frustrated = true;
    res.witness = FrustrationWitness{v, std::nullopt, res.trace.steps.size()};
  };
  auto frustrated_edge = [&](const Edge& e) {
    res.frustrated = true;
    res.witness = FrustrationWitness{std::nullopt, e, res.trace.steps.size()};
  };

  const long n0 = std::max(1, input.spin_count());
  const long induction_cap = 10L * n0 * n0 * n0;

  while (true) {
    // (a) single-spin deletions, frustrating on full rank
    bool deleted = true;
    while (deleted) {
      deleted = false;
      std::vector<VertexId> targets;
      for (const auto& [v, op] : h.single_spin_terms())
        if (is_active(v)) targets.push_back(v);
      if (targets.empty()) break;
      const VertexId v = targets[pick_index(targets.size())];
      const Matrix2 hv = h.single_spin_terms().at(v);
      if (operator_rank(hv) == 2) {
        frustrated_single(v);
        return res;
      }
      SpinDeletion d{v, Vector2(kernel_basis(hv)[0])};
      apply_deletion(h, d);
      res.trace.steps.push_back(d);
      res.network.nodes.push_back(d);
      deleted = true;
    }

    // (b) rank scan over internal edges: full rank frustrates, rank 2-3 contracts
    std::vector<std::pair<Edge, int>> eligible;
    for (const auto& [edge, op] : h.two_spin_terms()) {
      if (!is_active(edge.a) || !is_active(edge.b)) continue;
      int rank = operator_rank(op);
      if (rank == 4) {
        frustrated_edge(edge);
        return res;
      }
      if (rank >= 2) eligible.push_back({edge, rank});
    }
    if (!eligible.empty()) {
      auto [edge, rank] = eligible[pick_index(eligible.size())];
      const Matrix4 term = h.two_spin_terms().at(edge);
      TermNaturality tn = classify_naturality(term);
      if (rank == 2 && !tn.natural) {
        auto sub = substitute_nonnatural_rank2(term);
        Substitution s{edge, sub.slot == 0 ? edge.a : edge.b, sub.op};
        apply_substitution(h, s);
        res.trace.steps.push_back(s);
        continue;
      }
      auto [psi0, psi1] = contraction_basis(term, rank, tn.natural);
      ComplexMatrix u(4, 2);
      u.col(0) = psi0;
      u.col(1) = psi1;
      TwoSpinContraction c{edge.a, edge.b, edge, u};
      apply_contraction(h, c);
      res.trace.steps.push_back(c);
      res.network.nodes.push_back(c);
      continue;
    }

    // (c) homogeneous phase: induce constraints until closure or a rank >= 2
    // accumulation sends us back to (b).
    bool rank2_event = false;
    bool changed = true;
    long iterations = 0;
    while (changed && !rank2_event) {
      changed = false;
      std::vector<VertexId> middles;
      for (const auto& v : h.vertices())
        if (is_active(v)) middles.push_back(v);
      if (opts.randomize_order) {
        for (std::size_t i = middles.size(); i > 1; --i)
          std::swap(middles[i - 1], middles[rng.next_u64() % i]);
      }
      for (const auto& b : middles) {
        std::vector<VertexId> nbrs;
        for (const auto& w : h.neighbors(b))
          if (is_active(w)) nbrs.push_back(w);
        for (std::size_t i = 0; i < nbrs.size() && !rank2_event; ++i) {
          for (std::size_t j = i + 1; j < nbrs.size() && !rank2_event; ++j) {
            const VertexId &x = nbrs[i], &z = nbrs[j];
            if (++iterations > induction_cap)
              fail(ErrorCode::IterationLimit, "constraint induction exceeded its iteration cap");
            Vector4 beta_xb = oriented_vector(h.two_spin_terms().at(Edge(x, b)), Edge(x, b), x);
            Vector4 beta_bz = oriented_vector(h.two_spin_terms().at(Edge(b, z)), Edge(b, z), b);
            auto induced = induce_constraint(beta_xb, beta_bz);
            if (!induced) continue;
            Edge enew(x, z);
            Vector4 beta = (x == enew.a) ? *induced : swap_vec(*induced);
            std::optional<Matrix4> existing;
            auto it = h.two_spin_terms().find(enew);
            if (it != h.two_spin_terms().end()) existing = it->second;
            bool colinear = false;
            Matrix4 acc = accumulate_term(existing, beta, &colinear);
            if (colinear) continue;
            h.set_two_spin(enew, acc);
            int new_rank = operator_rank(acc);
            res.trace.steps.push_back(ConstraintInduction{enew.a, b, enew.b, beta});
            res.trace.steps.push_back(TermAccumulation{enew, beta, false, new_rank});
            changed = true;
            if (new_rank >= 2) rank2_event = true;
          }
        }
        if (rank2_event) break;
      }
    }
    if (rank2_event) continue;
    break;
  }

  for (const auto& v : h.vertices()) res.network.free_inputs.push_back(v);
  return res;
}

ComplexVector replay_network(const TreeTensorNetwork& network, const ComplexVector& phi) {
  if (phi.size() != (Eigen::Index{1} << network.free_inputs.size()))
    fail(ErrorCode::DimensionMismatch, "input dimension does not match the free network inputs");

  std::vector<VertexId> axes = network.free_inputs;
  ComplexVector state = phi;

  auto axis_pos = [](const std::vector<VertexId>& v, const VertexId& x) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };

  for (auto it = network.nodes.rbegin(); it != network.nodes.rend(); ++it) {
    const int n_old = static_cast<int>(axes.size());
    const Eigen::Index dim_old = Eigen::Index{1} << n_old;

    if (std::holds_alternative<SpinDeletion>(*it)) {
      const auto& d = std::get<SpinDeletion>(*it);
      std::vector<VertexId> new_axes = axes;
      new_axes.insert(new_axes.begin() + axis_pos(new_axes, d.vertex), d.vertex);
      const int pv = axis_pos(new_axes, d.vertex);
      const int n_new = n_old + 1;
      ComplexVector out = ComplexVector::Zero(dim_old * 2);
      for (Eigen::Index i = 0; i < dim_old; ++i) {
        // splice the new bit into position pv
        Eigen::Index hi = i >> (n_old - pv);
        Eigen::Index lo = i & ((Eigen::Index{1} << (n_old - pv)) - 1);
        for (int k = 0; k < 2; ++k) {
          Eigen::Index j = (hi << (n_new - pv)) | (Eigen::Index(k) << (n_old - pv)) | lo;
          out(j) = d.state(k) * state(i);
        }
      }
      axes = std::move(new_axes);
      state = std::move(out);
    } else {
      const auto& c = std::get<TwoSpinContraction>(*it);
      const int ps = axis_pos(axes, c.survivor);
      std::vector<VertexId> new_axes = axes;
      new_axes.insert(new_axes.begin() + axis_pos(new_axes, c.removed), c.removed);
      const int n_new = n_old + 1;
      const int pa = axis_pos(new_axes, c.edge.a);
      const int pb = axis_pos(new_axes, c.edge.b);
      std::map<VertexId, int> old_pos;
      for (int q = 0; q < n_old; ++q) old_pos[axes[q]] = q;
      ComplexVector out = ComplexVector::Zero(Eigen::Index{1} << n_new);
      std::vector<int> bits(n_old), new_bits(n_new);
      for (Eigen::Index i = 0; i < dim_old; ++i) {
        for (int q = 0; q < n_old; ++q) bits[q] = static_cast<int>((i >> (n_old - 1 - q)) & 1);
        const int ks = bits[ps];
        // transfer bits of untouched axes
        for (int q = 0; q < n_new; ++q) {
          const VertexId& ax = new_axes[q];
          if (ax == c.edge.a || ax == c.edge.b) continue;
          new_bits[q] = bits[old_pos.at(ax)];
        }
        for (int ka = 0; ka < 2; ++ka)
          for (int kb = 0; kb < 2; ++kb) {
            new_bits[pa] = ka;
            new_bits[pb] = kb;
            Eigen::Index j = 0;
            for (int q = 0; q < n_new; ++q) j = (j << 1) | new_bits[q];
            out(j) += c.isometry(2 * ka + kb, ks) * state(i);
          }
      }
      axes = std::move(new_axes);
      state = std::move(out);
    }
  }

  if (axes != network.original_vertices)
    fail(ErrorCode::Inconsistent, "network does not replay onto the original vertex set");
  return state;
}

Hamiltonian replay_trace(const Hamiltonian& input, const ReductionTrace& trace) {
  Hamiltonian h = input;
  for (const auto& step : trace.steps) {
    std::visit(
        [&h](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TwoSpinContraction>) {
            apply_contraction(h, s);
          } else if constexpr (std::is_same_v<T, SpinDeletion>) {
            apply_deletion(h, s);
          } else if constexpr (std::is_same_v<T, Substitution>) {
            apply_substitution(h, s);
          } else if constexpr (std::is_same_v<T, TermAccumulation>) {
            apply_accumulation(h, s);
          }
          // ConstraintInduction records provenance; the paired accumulation
          // carries the effect.
        },
        step);
  }
  return h;
}

}  // namespace qsat
