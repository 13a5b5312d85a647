#include "qsat/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace qsat {

namespace {

double log2p1(int n) { return std::log2(static_cast<double>(n) + 1.0); }

// Connected components of `verts` under the given edge predicate.
std::vector<std::set<VertexId>> components_under(
    const std::set<VertexId>& verts, const Hamiltonian& h,
    const std::function<bool(const Edge&, const Matrix4&)>& keep) {
  std::map<VertexId, VertexId> parent;
  for (const auto& v : verts) parent[v] = v;
  std::function<VertexId(const VertexId&)> find = [&](const VertexId& v) -> VertexId {
    VertexId root = v;
    while (parent[root] != root) root = parent[root];
    return root;
  };
  for (const auto& [e, op] : h.two_spin_terms()) {
    if (!verts.count(e.a) || !verts.count(e.b)) continue;
    if (!keep(e, op)) continue;
    parent[find(e.a)] = find(e.b);
  }
  std::map<VertexId, std::set<VertexId>> groups;
  for (const auto& v : verts) groups[find(v)].insert(v);
  std::vector<std::set<VertexId>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace

Bipartition make_bipartition(const Hamiltonian& h, const std::set<VertexId>& a) {
  Bipartition bip;
  bip.a = a;
  for (const auto& v : a)
    if (!h.has_vertex(v)) fail(ErrorCode::InvalidInput, "region names unknown vertex " + v);
  if (a.empty() || a.size() == h.vertices().size())
    fail(ErrorCode::InvalidInput, "region must be a nonempty proper subset");
  for (const auto& v : h.vertices())
    if (!a.count(v)) bip.b.insert(v);

  std::set<VertexId> touching;
  for (const auto& [e, op] : h.two_spin_terms()) {
    (void)op;
    bool ina = a.count(e.a) > 0, inb = a.count(e.b) > 0;
    if (ina != inb) {
      bip.boundary.push_back(e);
      touching.insert(ina ? e.a : e.b);
    }
  }
  bip.boundary_spins = static_cast<int>(touching.size());
  bip.components = components_under(a, h, [](const Edge&, const Matrix4&) { return true; });
  for (const auto& comp : bip.components) {
    int alpha = 0;
    for (const auto& v : comp)
      if (touching.count(v)) ++alpha;
    bip.component_boundary_spins.push_back(alpha);
  }
  return bip;
}

SubsystemReduction reduce_subsystem(const Hamiltonian& h, const std::set<VertexId>& a) {
  SubsystemReduction out;
  out.components = components_under(a, h, [](const Edge&, const Matrix4&) { return true; });

  ReduceOptions opts;
  opts.active = a;
  out.result = reduce_to_complete(h, opts);
  out.frustrated = out.result.frustrated;
  if (out.frustrated) return out;

  for (const auto& comp : out.components) {
    int survivors = 0;
    for (const auto& v : comp)
      if (out.result.h_c.has_vertex(v)) ++survivors;
    out.reduced_sizes.push_back(survivors);
  }
  return out;
}

double schmidt_measure_bound(const SubsystemReduction& r) {
  if (r.frustrated) fail(ErrorCode::FrustratedSubsystem, "region carries a full-rank term");
  double bound = 0.0;
  for (int n : r.reduced_sizes) bound += log2p1(n);
  return bound;
}

LatticeConstants fit_lattice_constants(const Hamiltonian& h, double c, int size_cap) {
  LatticeConstants lc;
  lc.c = c;
  const int n = h.spin_count();
  if (n < 2) fail(ErrorCode::InvalidConstants, "lattice too small to fit constants");

  // Enumerate proper connected subsets up to the cap by breadth-first
  // extension; the vertex count is desk scale.
  std::set<std::set<VertexId>> seen;
  std::vector<std::set<VertexId>> frontier;
  for (const auto& v : h.vertices()) {
    frontier.push_back({v});
    seen.insert({v});
  }
  double best = std::numeric_limits<double>::infinity();
  auto alpha_of = [&](const std::set<VertexId>& s) {
    std::set<VertexId> touching;
    for (const auto& [e, op] : h.two_spin_terms()) {
      (void)op;
      bool ina = s.count(e.a) > 0, inb = s.count(e.b) > 0;
      if (ina != inb) touching.insert(ina ? e.a : e.b);
    }
    return static_cast<int>(touching.size());
  };
  while (!frontier.empty()) {
    std::vector<std::set<VertexId>> next;
    for (const auto& s : frontier) {
      if (static_cast<int>(s.size()) < n)  // proper subset
        best = std::min(best, alpha_of(s) / std::pow(static_cast<double>(s.size()), c));
      if (static_cast<int>(s.size()) >= size_cap) continue;
      for (const auto& v : s)
        for (const auto& w : h.neighbors(v)) {
          if (s.count(w)) continue;
          std::set<VertexId> grown = s;
          grown.insert(w);
          if (seen.insert(grown).second) next.push_back(std::move(grown));
        }
    }
    frontier = std::move(next);
  }
  if (!std::isfinite(best) || best <= 0.0)
    fail(ErrorCode::InvalidConstants, "no valid boundary constant for this lattice");
  lc.k = best;
  return lc;
}

double area_law_bound(const Bipartition& bip, const SubsystemReduction& r,
                      const LatticeConstants& lc) {
  if (r.frustrated) fail(ErrorCode::FrustratedSubsystem, "region carries a full-rank term");
  for (std::size_t j = 0; j < r.reduced_sizes.size(); ++j) {
    double need = lc.k * std::pow(static_cast<double>(r.reduced_sizes[j]), lc.c);
    if (bip.component_boundary_spins[j] + 1e-12 < need)
      fail(ErrorCode::InvalidConstants, "constants violate alpha_j >= K n_j^c on a component");
  }
  return std::min(schmidt_measure_bound(r), bip.boundary_spins / lc.k);
}

double log_law_bound(const Bipartition& bip, const SubsystemReduction& r) {
  if (bip.components.size() != 1)
    fail(ErrorCode::NotContiguous, "log law applies to contiguous regions");
  if (r.frustrated) fail(ErrorCode::FrustratedSubsystem, "region carries a full-rank term");
  return log2p1(r.reduced_sizes.at(0));
}

double heavy_component_bound(const Hamiltonian& h, const std::set<VertexId>& a) {
  auto interaction = components_under(a, h, [](const Edge&, const Matrix4&) { return true; });
  auto heavy = components_under(
      a, h, [](const Edge&, const Matrix4& op) { return operator_rank(op) >= 2; });

  // beta_j: heavy components inside interaction component j.
  double bound = 0.0;
  for (const auto& comp : interaction) {
    int beta = 0;
    for (const auto& hc : heavy)
      if (comp.count(*hc.begin())) ++beta;
    bound += log2p1(beta);
  }
  return bound;
}

CascadeReport rank3_cascade_classify(const Hamiltonian& h) {
  CascadeReport report;
  for (const auto& [e, op] : h.two_spin_terms())
    if (operator_rank(op) == 3) report.rank3_edges.push_back(e);
  if (report.rank3_edges.empty())
    report.verdict = CascadeClass::no_cascade;
  else if (report.rank3_edges.size() == 1)
    report.verdict = CascadeClass::unique_ground_state;
  else
    report.verdict = CascadeClass::frustrated;
  return report;
}

EntanglementReport analyze_bipartition(const Hamiltonian& h, const std::set<VertexId>& a,
                                       const std::optional<LatticeConstants>& lc) {
  EntanglementReport rep;
  rep.bipartition = make_bipartition(h, a);
  auto red = reduce_subsystem(h, a);
  rep.frustrated = red.frustrated;
  if (rep.frustrated) return rep;
  rep.reduced_sizes = red.reduced_sizes;
  rep.schmidt_bound = schmidt_measure_bound(red);
  rep.heavy_bound = heavy_component_bound(h, a);
  if (rep.bipartition.components.size() == 1) rep.log_bound = log_law_bound(rep.bipartition, red);
  if (lc) {
    rep.constants = lc;
    rep.area_bound = area_law_bound(rep.bipartition, red, *lc);
  }
  return rep;
}

}  // namespace qsat
