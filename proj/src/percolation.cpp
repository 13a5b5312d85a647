#include "qsat/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsat {

namespace {

long ipow(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

struct Stats {
  double mean = 0.0, se = 0.0;
};

Stats mean_se(const std::vector<double>& xs) {
  Stats s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  if (xs.size() > 1) s.se = std::sqrt(var / (n - 1.0) / n);
  return s;
}

}  // namespace

LatticeLabeling sample_lattice(const RandomLatticeConfig& cfg) {
  if (cfg.dimension < 1 || cfg.side < 2 || cfg.p < 0.0 || cfg.p > 1.0)
    fail(ErrorCode::InvalidInput, "lattice config out of range");
  LatticeLabeling lab;
  lab.cfg = cfg;
  lab.vertex_count = static_cast<int>(ipow(cfg.side, cfg.dimension));

  // vertex index = mixed-radix coordinates, fastest axis last
  std::vector<long> stride(cfg.dimension);
  stride[cfg.dimension - 1] = 1;
  for (int d = cfg.dimension - 2; d >= 0; --d) stride[d] = stride[d + 1] * cfg.side;

  CounterRng rng(cfg.seed);
  long edge_index = 0;
  for (long v = 0; v < lab.vertex_count; ++v) {
    for (int d = 0; d < cfg.dimension; ++d) {
      int coord = static_cast<int>((v / stride[d]) % cfg.side);
      long w;
      if (coord + 1 < cfg.side) {
        w = v + stride[d];
      } else if (cfg.periodic && cfg.side > 2) {
        w = v - static_cast<long>(coord) * stride[d];
      } else {
        continue;
      }
      lab.edges.emplace_back(static_cast<int>(v), static_cast<int>(w));
      // one uniform per edge, coupled across p
      double u = rng.derive(static_cast<uint64_t>(edge_index)).next_double();
      lab.entangled.push_back(u < cfg.p);
      ++edge_index;
    }
  }
  return lab;
}

ClusterDecomposition clusters(const LatticeLabeling& lab) {
  UnionFind uf(lab.vertex_count);
  for (std::size_t e = 0; e < lab.edges.size(); ++e)
    if (lab.entangled[e]) uf.unite(lab.edges[e].first, lab.edges[e].second);

  ClusterDecomposition dec;
  dec.label.resize(lab.vertex_count);
  std::vector<int> compact(lab.vertex_count, -1);
  std::vector<int> sizes;
  for (int v = 0; v < lab.vertex_count; ++v) {
    int root = uf.find(v);
    if (compact[root] < 0) {
      compact[root] = static_cast<int>(sizes.size());
      sizes.push_back(uf.size[root]);
    }
    dec.label[v] = compact[root];
  }
  dec.sizes = std::move(sizes);
  std::sort(dec.sizes.begin(), dec.sizes.end(), std::greater<int>());
  dec.count = static_cast<int>(dec.sizes.size());
  return dec;
}

DegeneracyEstimate degeneracy_bound(const ClusterDecomposition& dec, int vertex_count) {
  DegeneracyEstimate est;
  for (int s : dec.sizes) est.log2_dim_bound += std::log2(static_cast<double>(s) + 1.0);
  if (!dec.sizes.empty() && vertex_count > 0)
    est.largest_fraction = static_cast<double>(dec.sizes.front()) / vertex_count;
  if (vertex_count > 0) est.cluster_density = static_cast<double>(dec.count) / vertex_count;
  return est;
}

ScalingReport monte_carlo_scaling(int dimension, double p, const std::vector<int>& sides,
                                  int trials, uint64_t seed, bool periodic,
                                  bool collect_trials) {
  if (trials < 30) fail(ErrorCode::InsufficientTrials, "need at least 30 trials per size");
  ScalingReport report;
  report.dimension = dimension;
  report.p = p;
  report.trials = trials;
  report.seed = seed;

  CounterRng root(seed);
  for (int side : sides) {
    ScalingPoint pt;
    pt.side = side;
    pt.vertex_count = ipow(side, dimension);
    std::vector<double> kappas, thetas, bounds;
    for (int t = 0; t < trials; ++t) {
      RandomLatticeConfig cfg;
      cfg.dimension = dimension;
      cfg.side = side;
      cfg.p = p;
      cfg.periodic = periodic;
      cfg.seed = root.derive((static_cast<uint64_t>(side) << 32) ^ static_cast<uint64_t>(t))
                     .next_u64();
      auto dec = clusters(sample_lattice(cfg));
      auto est = degeneracy_bound(dec, static_cast<int>(pt.vertex_count));
      kappas.push_back(est.cluster_density);
      thetas.push_back(est.largest_fraction);
      bounds.push_back(est.log2_dim_bound);
      if (collect_trials)
        report.records.push_back(
            {side, t, dec.count, dec.sizes.empty() ? 0 : dec.sizes[0], est.log2_dim_bound});
    }
    auto k = mean_se(kappas);
    auto th = mean_se(thetas);
    auto b = mean_se(bounds);
    pt.kappa_hat = k.mean;
    pt.kappa_se = k.se;
    pt.theta_hat = th.mean;
    pt.theta_se = th.se;
    pt.bound_hat = b.mean;
    pt.bound_se = b.se;
    report.points.push_back(pt);
  }

  // 2-parameter least squares: bound ~ a log(n) + b n
  if (report.points.size() >= 2) {
    double s_ll = 0, s_ln = 0, s_nn = 0, s_lb = 0, s_nb = 0;
    for (const auto& pt : report.points) {
      double l = std::log(static_cast<double>(pt.vertex_count));
      double n = static_cast<double>(pt.vertex_count);
      s_ll += l * l;
      s_ln += l * n;
      s_nn += n * n;
      s_lb += l * pt.bound_hat;
      s_nb += n * pt.bound_hat;
    }
    double det = s_ll * s_nn - s_ln * s_ln;
    if (std::abs(det) > 1e-12) {
      report.fit_log_coefficient = (s_lb * s_nn - s_nb * s_ln) / det;
      report.fit_linear_coefficient = (s_ll * s_nb - s_ln * s_lb) / det;
    }
  }
  return report;
}

double estimate_threshold(int dimension, int side, const std::vector<double>& p_grid, int trials,
                          uint64_t seed) {
  if (p_grid.size() < 3) fail(ErrorCode::InvalidInput, "need a grid of at least 3 points");
  std::vector<double> theta;
  for (double p : p_grid) {
    auto report = monte_carlo_scaling(dimension, p, {side}, trials, seed);
    theta.push_back(report.points[0].theta_hat);
  }
  double best_slope = -1.0, best_p = p_grid[0];
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i) {
    double slope = (theta[i + 1] - theta[i]) / (p_grid[i + 1] - p_grid[i]);
    if (slope > best_slope) {
      best_slope = slope;
      best_p = 0.5 * (p_grid[i] + p_grid[i + 1]);
    }
  }
  return best_p;
}

}  // namespace qsat
