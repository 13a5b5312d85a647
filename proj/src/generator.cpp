#include "qsat/generator.hpp"

#include <algorithm>

namespace qsat {

namespace {

VertexId vid(int i) { return std::to_string(i); }

// Random orthonormal frame: columns of the Q factor of a Gaussian 2x2.
std::pair<Vector2, Vector2> random_frame(CounterRng& rng) {
  Matrix2 g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.next_complex_normal();
  Eigen::HouseholderQR<Matrix2> qr(g);
  Matrix2 q = qr.householderQ();
  return {q.col(0), q.col(1)};
}

// Projector onto the orthogonal complement of the given orthonormal vectors.
Matrix4 complement_projector(const std::vector<Vector4>& onb) {
  Matrix4 p = Matrix4::Identity();
  for (const auto& v : onb) p -= v * v.adjoint();
  return p;
}

// Unit vector orthogonal to `pinned` inside C^4, drawn at random.
Vector4 random_orthogonal_state(CounterRng& rng, const Vector4& pinned) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vector4 v;
    for (int i = 0; i < 4; ++i) v(i) = rng.next_complex_normal();
    v -= pinned.dot(v) * pinned;
    double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  fail(ErrorCode::InvalidInput, "could not draw an orthogonal state");
}

void add_edge_vertices(Hamiltonian& h, const std::vector<Edge>& edges) {
  for (const auto& e : edges) {
    h.add_vertex(e.a);
    h.add_vertex(e.b);
  }
}

}  // namespace

std::vector<Edge> chain_edges(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(vid(i), vid(i + 1));
  return edges;
}

std::vector<Edge> cycle_edges(int n) {
  auto edges = chain_edges(n);
  if (n >= 3) edges.emplace_back(vid(n - 1), vid(0));
  return edges;
}

std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(vid(i), vid(j));
  return edges;
}

std::vector<VertexId> grid_vertices(int rows, int cols) {
  std::vector<VertexId> v;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) v.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
  return v;
}

std::vector<Edge> grid_edges(int rows, int cols) {
  auto name = [](int r, int c) { return "r" + std::to_string(r) + "c" + std::to_string(c); };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(name(r, c), name(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(name(r, c), name(r + 1, c));
    }
  return edges;
}

Vector2 random_qubit_state(CounterRng& rng) {
  Vector2 v;
  v << rng.next_complex_normal(), rng.next_complex_normal();
  return v / v.norm();
}

Vector4 random_entangled_state(CounterRng& rng, double min_det) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vector4 v;
    for (int i = 0; i < 4; ++i) v(i) = rng.next_complex_normal();
    v /= v.norm();
    if (entanglement_det(v) >= min_det) return v;
  }
  fail(ErrorCode::InvalidInput, "could not draw an entangled state");
}

Matrix2 random_invertible_gauge(CounterRng& rng, double max_condition) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    Matrix2 g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = rng.next_complex_normal();
    Eigen::JacobiSVD<Matrix2> svd(g);
    double smin = svd.singularValues()(1);
    if (smin <= 1e-6) continue;
    if (svd.singularValues()(0) / smin <= max_condition) return g;
  }
  fail(ErrorCode::InvalidInput, "could not draw a well-conditioned gauge");
}

PlantedInstance planted_on_graph(const std::vector<Edge>& edges, uint64_t seed) {
  CounterRng rng = CounterRng(seed).derive(0x91a);
  PlantedInstance inst;
  add_edge_vertices(inst.h, edges);
  for (const auto& v : inst.h.vertices()) inst.gauges[v] = random_invertible_gauge(rng);
  for (const auto& e : edges) {
    // <beta| = <Psi^-| (L_a (x) L_b)  =>  |beta> = (L_a+ (x) L_b+)|Psi^->
    Vector4 beta = kron2(Matrix2(inst.gauges.at(e.a).adjoint()),
                         Matrix2(inst.gauges.at(e.b).adjoint())) *
                   singlet();
    beta /= beta.norm();
    inst.h.add_two_spin(e.a, e.b, beta * beta.adjoint());
  }
  inst.h.finalize();
  inst.kernel_dim = inst.h.spin_count() + 1;
  return inst;
}

PlantedInstance planted_complete(int n, uint64_t seed) {
  return planted_on_graph(complete_edges(n), seed);
}

Hamiltonian two_string_instance(const std::vector<Edge>& edges, uint64_t seed) {
  CounterRng rng = CounterRng(seed).derive(0x75);
  Hamiltonian h;
  add_edge_vertices(h, edges);
  std::map<VertexId, std::pair<Vector2, Vector2>> frames;
  for (const auto& v : h.vertices()) frames[v] = random_frame(rng);
  for (const auto& e : edges) {
    const auto& [a0, a1] = frames.at(e.a);
    const auto& [b0, b1] = frames.at(e.b);
    Matrix4 term = complement_projector({kron2(a0, b0), kron2(a1, b1)});
    h.add_two_spin(e.a, e.b, term);
  }
  h.finalize();
  return h;
}

namespace {

Hamiltonian product_state_instance(const std::vector<Edge>& edges, uint64_t seed, int rank3_count,
                                   double rank2_fraction, bool pinned) {
  CounterRng rng = CounterRng(seed).derive(pinned ? 0x9111 : 0x9e);
  Hamiltonian h;
  add_edge_vertices(h, edges);
  if (rank3_count > static_cast<int>(edges.size()))
    fail(ErrorCode::InvalidInput, "more rank-3 terms than edges");

  std::map<VertexId, Vector2> chi;
  for (const auto& v : h.vertices()) chi[v] = random_qubit_state(rng);

  // Distinct edges promoted to rank 3.
  std::vector<std::size_t> idx(edges.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.next_u64() % i]);
  std::set<std::size_t> rank3(idx.begin(), idx.begin() + rank3_count);

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const Vector4 pinned_state =
        pinned ? kron2(chi.at(e.a), chi.at(e.b)) : random_entangled_state(rng, 0.01);
    Matrix4 term;
    if (rank3.count(i)) {
      term = complement_projector({pinned_state});
    } else if (rng.next_double() < rank2_fraction) {
      // rank 2: kernel = span{pinned, one random orthogonal direction}
      for (int attempt = 0;; ++attempt) {
        Vector4 extra = random_orthogonal_state(rng, pinned_state);
        term = complement_projector({pinned_state, extra});
        if (classify_naturality(term).natural) break;
        if (attempt > 64) fail(ErrorCode::InvalidInput, "no natural rank-2 draw");
      }
    } else {
      // rank 1: a random entangled constraint orthogonal to the pinned state
      for (int attempt = 0;; ++attempt) {
        Vector4 beta = random_orthogonal_state(rng, pinned_state);
        if (entanglement_det(beta) > 0.05) {
          term = beta * beta.adjoint();
          break;
        }
        if (attempt > 256) fail(ErrorCode::InvalidInput, "no entangled constraint draw");
      }
    }
    h.add_two_spin(e.a, e.b, term);
  }
  h.finalize();
  return h;
}

}  // namespace

Hamiltonian pinned_product_instance(const std::vector<Edge>& edges, uint64_t seed, int rank3_count,
                                    double rank2_fraction) {
  return product_state_instance(edges, seed, rank3_count, rank2_fraction, true);
}

Hamiltonian generic_natural_instance(const std::vector<Edge>& edges, uint64_t seed,
                                     int rank3_count, double rank2_fraction) {
  return product_state_instance(edges, seed, rank3_count, rank2_fraction, false);
}

GeneratedInstance reverse_network_instance(const ReverseNetworkSpec& spec, uint64_t seed) {
  if (spec.core_size < 1) fail(ErrorCode::InvalidInput, "core needs at least one spin");
  if (spec.chain_growth && spec.core_size != 1)
    fail(ErrorCode::InvalidInput, "chain growth starts from a single free spin");
  CounterRng rng = CounterRng(seed).derive(0x4ee);

  GeneratedInstance out;
  out.kernel_dim = spec.core_size + 1;

  if (spec.chain_growth) {
    if (spec.growth_steps == 0) {
      out.h.add_vertex(vid(0));
    } else {
      out.h = two_string_instance(chain_edges(spec.growth_steps + 1), rng.next_u64());
    }
    return out;
  }

  // Planted complete core; grown spins are attached in fixed states through
  // non-natural rank-2 terms |psi_perp><psi_perp| (x) eta, which the reduction
  // removes by substitution followed by deletion. Kernel dimension is
  // untouched: the attachment kernel contains psi (x) (everything).
  if (spec.core_size >= 2) {
    out.h = planted_complete(spec.core_size, rng.next_u64()).h;
  } else {
    out.h.add_vertex(vid(0));
  }

  std::vector<VertexId> attach_pool(out.h.vertices().begin(), out.h.vertices().end());
  for (int g = 0; g < spec.growth_steps; ++g) {
    VertexId fresh = "g" + std::to_string(g);
    VertexId host = attach_pool[rng.next_u64() % attach_pool.size()];
    Vector2 psi = random_qubit_state(rng);
    Vector2 psi_perp;
    psi_perp << -std::conj(psi(1)), std::conj(psi(0));
    Vector2 r = random_qubit_state(rng);
    Matrix2 eta = (0.5 + rng.next_double()) * Matrix2::Identity();
    eta += (0.5 + rng.next_double()) * (r * r.adjoint()).eval();
    // term on (fresh, host), fresh slot first
    Matrix4 term = kron2((psi_perp * psi_perp.adjoint()).eval(), eta);
    out.h.add_two_spin(fresh, host, term);
    attach_pool.push_back(fresh);
  }
  out.h.finalize();
  return out;
}

std::map<std::string, Hamiltonian> golden_examples() {
  std::map<std::string, Hamiltonian> models;

  // Four-spin cycle with |00><00| + |11><11| on every edge.
  {
    Hamiltonian h;
    Matrix4 term = Matrix4::Zero();
    term(0, 0) = 1.0;
    term(3, 3) = 1.0;
    h.add_two_spin(vid(1), vid(2), term);
    h.add_two_spin(vid(2), vid(3), term);
    h.add_two_spin(vid(3), vid(4), term);
    h.add_two_spin(vid(4), vid(1), term);
    h.finalize();
    models["xx4cycle"] = h;
  }

  // Ising pairs, rescaled: antiferromagnetic diag(2,0,0,2), ferromagnetic
  // diag(0,2,2,0).
  {
    Hamiltonian h;
    Matrix4 term = Matrix4::Zero();
    term(0, 0) = 2.0;
    term(3, 3) = 2.0;
    h.add_two_spin(vid(1), vid(2), term);
    h.finalize();
    models["ising-af-pair"] = h;
  }
  {
    Hamiltonian h;
    Matrix4 term = Matrix4::Zero();
    term(1, 1) = 2.0;
    term(2, 2) = 2.0;
    h.add_two_spin(vid(1), vid(2), term);
    h.finalize();
    models["ising-ferro-pair"] = h;
  }

  // Natural chain with two generic rank-3 terms; frustrated by the cascade.
  models["double-rank3"] = generic_natural_instance(chain_edges(4), 0xd0b1e, 2, 0.0);

  return models;
}

}  // namespace qsat
