#pragma once

#include <optional>

#include "qsat/ground_space.hpp"
#include "qsat/reduction.hpp"

namespace qsat {

struct Bipartition {
  std::set<VertexId> a;
  std::set<VertexId> b;
  std::vector<Edge> boundary;                   // edges with one endpoint on each side
  std::vector<std::set<VertexId>> components;   // components of A in the interaction graph
  int boundary_spins = 0;                       // alpha: spins of A adjacent to B
  std::vector<int> component_boundary_spins;    // alpha_j per component
};

Bipartition make_bipartition(const Hamiltonian& h, const std::set<VertexId>& a);

// Reductions applied to the terms internal to A only; cross terms are carried
// along. Each component of A ends complete and homogeneous.
struct SubsystemReduction {
  ReductionResult result;
  std::vector<std::set<VertexId>> components;
  std::vector<int> reduced_sizes;  // n~_j = surviving spins of component j
  bool frustrated = false;         // full-rank term inside A: H itself is frustrated
};

SubsystemReduction reduce_subsystem(const Hamiltonian& h, const std::set<VertexId>& a);

// sum_j log2(n~_j + 1); e-bit cap for any ground state across (A, B).
double schmidt_measure_bound(const SubsystemReduction& r);

// Lattice-family constants alpha_j >= K * n_j^c.
struct LatticeConstants {
  double c = 1.0;
  double k = 1.0;
};

// Tightest K valid on this lattice for the given exponent: minimum of
// alpha(S) / |S|^c over proper connected subsets up to the size cap.
LatticeConstants fit_lattice_constants(const Hamiltonian& h, double c, int size_cap = 8);

// min(schmidt bound, alpha / K), after checking alpha_j >= K n~_j^c.
double area_law_bound(const Bipartition& bip, const SubsystemReduction& r,
                      const LatticeConstants& lc);

// log2(n~ + 1) for contiguous A (equals the Schmidt-measure bound there).
double log_law_bound(const Bipartition& bip, const SubsystemReduction& r);

// Heavy = rank >= 2. beta_j counts heavy-edge components inside component j;
// the bound sums log2(beta_j + 1). With every internal edge heavy this is one
// e-bit for contiguous A.
double heavy_component_bound(const Hamiltonian& h, const std::set<VertexId>& a);

enum class CascadeClass {
  no_cascade,            // no rank-3 terms
  unique_ground_state,   // exactly one: dim ker <= 1, product up to one pair
  frustrated,            // two or more rank-3 terms in a connected natural model
};

struct CascadeReport {
  CascadeClass verdict = CascadeClass::no_cascade;
  std::vector<Edge> rank3_edges;
};

CascadeReport rank3_cascade_classify(const Hamiltonian& h);

struct EntanglementReport {
  Bipartition bipartition;
  std::vector<int> reduced_sizes;
  double schmidt_bound = 0.0;
  double heavy_bound = 0.0;
  std::optional<double> log_bound;       // contiguous A only
  std::optional<double> area_bound;      // when constants are supplied/fitted
  std::optional<LatticeConstants> constants;
  bool frustrated = false;
};

EntanglementReport analyze_bipartition(const Hamiltonian& h, const std::set<VertexId>& a,
                                       const std::optional<LatticeConstants>& lc = std::nullopt);

}  // namespace qsat
