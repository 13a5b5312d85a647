#pragma once

#include <cstdint>
#include <vector>

#include "qsat/error.hpp"
#include "qsat/rng.hpp"

namespace qsat {

// d-dimensional rectangular lattice with independently labeled edges.
struct RandomLatticeConfig {
  int dimension = 2;
  int side = 8;
  double p = 0.5;  // probability an edge is entangled
  uint64_t seed = 0;
  bool periodic = false;
};

struct LatticeLabeling {
  RandomLatticeConfig cfg;
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<bool> entangled;  // per edge

  int entangled_count() const {
    int c = 0;
    for (bool b : entangled) c += b ? 1 : 0;
    return c;
  }
};

// Edge labels are a pure function of (seed, edge index): coupled across p, so
// raising p only adds entangled edges.
LatticeLabeling sample_lattice(const RandomLatticeConfig& cfg);

struct ClusterDecomposition {
  std::vector<int> label;  // per-vertex cluster id, compacted
  std::vector<int> sizes;  // descending
  int count = 0;
};

// Components under entangled edges only; isolated vertices are singletons.
ClusterDecomposition clusters(const LatticeLabeling& lab);

struct DegeneracyEstimate {
  double log2_dim_bound = 0.0;   // sum_j log2(|A_j| + 1)
  double largest_fraction = 0.0;  // |A_0| / n
  double cluster_density = 0.0;   // k / n
};

DegeneracyEstimate degeneracy_bound(const ClusterDecomposition& dec, int vertex_count);

struct ScalingPoint {
  int side = 0;
  long vertex_count = 0;
  double kappa_hat = 0.0, kappa_se = 0.0;  // cluster density
  double theta_hat = 0.0, theta_se = 0.0;  // largest-cluster fraction
  double bound_hat = 0.0, bound_se = 0.0;  // E[log2 dim M]
};

struct TrialRecord {
  int side = 0;
  int trial = 0;
  int cluster_count = 0;
  int largest_cluster = 0;
  double bound = 0.0;
};

struct ScalingReport {
  int dimension = 0;
  double p = 0.0;
  int trials = 0;
  uint64_t seed = 0;
  std::vector<ScalingPoint> points;
  std::vector<TrialRecord> records;  // populated when collect_trials is set
  // least-squares fit E[log2 dim M] ~ a log(n) + b n across the sizes
  double fit_log_coefficient = 0.0;
  double fit_linear_coefficient = 0.0;
};

ScalingReport monte_carlo_scaling(int dimension, double p, const std::vector<int>& sides,
                                  int trials, uint64_t seed, bool periodic = false,
                                  bool collect_trials = false);

// Empirical percolation threshold: midpoint of the grid interval where the
// largest-cluster fraction climbs fastest.
double estimate_threshold(int dimension, int side, const std::vector<double>& p_grid, int trials,
                          uint64_t seed);

}  // namespace qsat
