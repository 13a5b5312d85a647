#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsat/hamiltonian.hpp"
#include "qsat/rng.hpp"

namespace qsat {

// Graph shapes used by the generators (vertex ids are decimal strings, or
// r<i>c<j> for grids).
std::vector<Edge> chain_edges(int n);
std::vector<Edge> cycle_edges(int n);
std::vector<Edge> complete_edges(int n);
std::vector<Edge> grid_edges(int rows, int cols);
std::vector<VertexId> grid_vertices(int rows, int cols);

// Gauge-planted instances: random invertible L_v (condition number capped)
// define rank-1 constraints <beta_uv| ~ <Psi^-|(L_u (x) L_v) on every edge.
// Connected graphs give natural, frustration-free instances with ground-space
// dimension n + 1.
struct PlantedInstance {
  Hamiltonian h;
  std::map<VertexId, Matrix2> gauges;
  int kernel_dim = 0;
};

PlantedInstance planted_on_graph(const std::vector<Edge>& edges, uint64_t seed);
PlantedInstance planted_complete(int n, uint64_t seed);

// Rank-2 "two-string" instances: per-vertex orthonormal frames, each edge term
// projects out everything except the two aligned frame strings. Natural,
// frustration-free, ground-space dimension 2 on any connected graph; their
// reduction is contraction-only (a path for chain graphs).
Hamiltonian two_string_instance(const std::vector<Edge>& edges, uint64_t seed);

// Instances pinned to one product state: every term keeps a fixed random
// product state in its kernel. rank3_count edges carry rank-3 terms (kernel
// exactly the pinned pair state), a rank2_fraction of the rest carry rank-2
// terms, the others entangled rank-1 constraints. Natural and frustration-free
// by construction; with rank3_count >= 1 the ground state is unique.
Hamiltonian pinned_product_instance(const std::vector<Edge>& edges, uint64_t seed,
                                    int rank3_count = 0, double rank2_fraction = 0.3);

// Generic natural instances (no alignment): random natural terms of the given
// ranks; typically frustrated once the graph has cycles or rank-3 terms.
Hamiltonian generic_natural_instance(const std::vector<Edge>& edges, uint64_t seed,
                                     int rank3_count = 0, double rank2_fraction = 0.3);

// Planted complete core grown in reverse through the recorded isometry kinds:
// chain growth (core_size 1) yields the two-string family whose reduction
// trace is a path; pinned growth attaches spins in fixed states, exercising
// substitutions and deletions. Ground-space dimension stays core_size + 1.
struct ReverseNetworkSpec {
  int core_size = 1;
  int growth_steps = 0;
  bool chain_growth = false;  // requires core_size == 1
};

struct GeneratedInstance {
  Hamiltonian h;
  int kernel_dim = 0;
};

GeneratedInstance reverse_network_instance(const ReverseNetworkSpec& spec, uint64_t seed);

// Named models anchored to worked examples.
std::map<std::string, Hamiltonian> golden_examples();

// Random helpers shared by tests.
Vector2 random_qubit_state(CounterRng& rng);
Vector4 random_entangled_state(CounterRng& rng, double min_det = 0.05);
Matrix2 random_invertible_gauge(CounterRng& rng, double max_condition = 10.0);

}  // namespace qsat
