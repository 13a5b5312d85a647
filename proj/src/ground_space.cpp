#include "qsat/ground_space.hpp"

#include <algorithm>
#include <cmath>

#include "qsat/rng.hpp"

namespace qsat {

namespace {

// Unit constraint vector of a rank-1 term in canonical edge order.
Vector4 beta_of(const Matrix4& op) {
  EighResult es = eigh(op);
  return phase_fixed(es.eigenvectors.col(3));
}

// Functional components of <Psi^-|(L_u (x) L_v) on |i>|j>.
Vector4 singlet_gauge_functional(const Matrix2& lu, const Matrix2& lv) {
  const Vector4 s = singlet();
  Vector4 f = Vector4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          f(2 * i + j) += std::conj(s(2 * k + l)) * lu(k, i) * lv(l, j);
  return f;
}

int index_of(const std::vector<VertexId>& order, const VertexId& v) {
  auto it = std::lower_bound(order.begin(), order.end(), v);
  if (it == order.end() || *it != v) fail(ErrorCode::InvalidInput, "vertex not present: " + v);
  return static_cast<int>(it - order.begin());
}

}  // namespace

GaugeSolution solve_gauge(const Hamiltonian& h_c) {
  if (!h_c.single_spin_terms().empty())
    fail(ErrorCode::Inconsistent, "gauge construction needs a Hamiltonian without single-spin terms");
  for (const auto& [e, op] : h_c.two_spin_terms())
    if (operator_rank(op) != 1)
      fail(ErrorCode::Inconsistent, "gauge construction needs a homogeneous Hamiltonian");

  GaugeSolution g;
  if (h_c.vertices().empty()) return g;

  std::vector<VertexId> order(h_c.vertices().begin(), h_c.vertices().end());
  g.anchor = order[0];
  g.gauge[g.anchor] = Matrix2::Identity();

  if (order.size() >= 2) {
    const std::size_t pairs = order.size() * (order.size() - 1) / 2;
    if (h_c.two_spin_terms().size() != pairs)
      fail(ErrorCode::Inconsistent,
           "complete Hamiltonians carry a term on every pair of spins");
  }

  // L_v from the anchor edge: reshape <beta| against eps * L.
  const Matrix2 eps_inv = (Matrix2() << 0.0, -1.0, 1.0, 0.0).finished();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const VertexId& v = order[k];
    Edge e(g.anchor, v);  // anchor is the smallest vertex, so e.a == anchor
    Vector4 beta = beta_of(h_c.two_spin_terms().at(e));
    Matrix2 gmat;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gmat(i, j) = std::conj(beta(2 * i + j));
    Matrix2 l_raw = eps_inv * gmat;
    Complex det = l_raw(0, 0) * l_raw(1, 1) - l_raw(0, 1) * l_raw(1, 0);
    if (std::abs(det) <= default_tols().rank)
      fail(ErrorCode::NotNatural, "product constraint on edge (" + e.a + "," + e.b + ")");
    g.gauge[v] = l_raw / std::sqrt(det);
  }

  // Scalars and the Eq.-(23) residual on every edge; failures signal an input
  // that is not actually closed under constraint induction.
  for (const auto& [e, op] : h_c.two_spin_terms()) {
    Vector4 beta = beta_of(op);
    Vector4 want;  // functional components of <beta|
    for (int i = 0; i < 4; ++i) want(i) = std::conj(beta(i));
    Vector4 f = singlet_gauge_functional(g.gauge.at(e.a), g.gauge.at(e.b));
    Complex lambda = f.dot(want) / f.squaredNorm();
    if ((want - lambda * f).norm() > 1e-8 * want.norm())
      fail(ErrorCode::Inconsistent,
           "constraint on edge (" + e.a + "," + e.b + ") is not singlet-gauge consistent");
    g.scale[e] = lambda;
  }
  return g;
}

ComplexMatrix symmetric_basis(int n_c) {
  if (n_c < 0) fail(ErrorCode::InvalidInput, "negative spin count");
  const Eigen::Index dim = Eigen::Index{1} << n_c;
  ComplexMatrix w = ComplexMatrix::Zero(dim, n_c + 1);
  std::vector<double> counts(n_c + 1, 0.0);
  for (Eigen::Index x = 0; x < dim; ++x) {
    int weight = 0;
    for (int q = 0; q < n_c; ++q) weight += static_cast<int>((x >> q) & 1);
    w(x, weight) = 1.0;
    counts[weight] += 1.0;
  }
  for (int k = 0; k <= n_c; ++k) w.col(k) /= std::sqrt(counts[k]);
  return w;
}

namespace {

ProductBasis assemble_basis(const Hamiltonian& h_c, const GaugeSolution& g,
                            const std::vector<Vector2>& seeds) {
  ProductBasis basis;
  basis.order.assign(h_c.vertices().begin(), h_c.vertices().end());
  const int n_c = static_cast<int>(basis.order.size());
  basis.seeds = seeds;

  for (std::size_t i = 0; i < basis.seeds.size(); ++i)
    for (std::size_t j = i + 1; j < basis.seeds.size(); ++j) {
      Complex det = basis.seeds[i](0) * basis.seeds[j](1) - basis.seeds[i](1) * basis.seeds[j](0);
      if (std::abs(det) <= 1e-8) fail(ErrorCode::DependentSeeds, "seeds are pairwise dependent");
    }

  // Ground factors L_v^{-1} alpha_j, unit-normalized per site.
  std::map<VertexId, Matrix2> inverse;
  for (const auto& v : basis.order) inverse[v] = g.gauge.at(v).inverse();
  for (int j = 0; j <= n_c; ++j) {
    std::vector<Vector2> states;
    for (const auto& v : basis.order) {
      Vector2 f = inverse.at(v) * basis.seeds[j];
      states.push_back(f / f.norm());
    }
    basis.site_states.push_back(std::move(states));
  }

  // Gram data: entrywise product of per-site overlap matrices.
  const int m = n_c + 1;
  basis.gram = ComplexMatrix::Ones(m, m);
  for (int site = 0; site < n_c; ++site)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        basis.gram(j, k) *= basis.site_states[j][site].dot(basis.site_states[k][site]);

  EighResult es = eigh(basis.gram);
  basis.u = es.eigenvectors;
  basis.delta = es.eigenvalues;
  return basis;
}

std::vector<Vector2> equispaced_seeds(int n_c) {
  std::vector<Vector2> seeds;
  for (int j = 0; j <= n_c; ++j) {
    double theta = j * M_PI / (2.0 * (n_c + 1));
    seeds.push_back((Vector2() << std::cos(theta), std::sin(theta)).finished());
  }
  return seeds;
}

}  // namespace

ProductBasis product_basis(const Hamiltonian& h_c, const GaugeSolution& g,
                           const std::optional<std::vector<Vector2>>& seeds) {
  const int n_c = h_c.spin_count();
  ProductBasis basis;

  if (seeds) {
    if (static_cast<int>(seeds->size()) != n_c + 1)
      fail(ErrorCode::InvalidInput, "need exactly n_c + 1 seeds");
    basis = assemble_basis(h_c, g, *seeds);
  } else {
    // Equispaced angles first. The gauges can squeeze those toward a common
    // ray and degrade the Gram spectrum badly, so fall back to alternative
    // frames (average-metric whitened, then fixed random rotations) and keep
    // the best-conditioned candidate.
    basis = assemble_basis(h_c, g, equispaced_seeds(n_c));
    if (n_c > 0 && basis.delta(0) < 1e-8) {
      std::vector<std::vector<Vector2>> candidates;

      Matrix2 metric = Matrix2::Zero();
      for (const auto& [v, l] : g.gauge) {
        Matrix2 li = l.inverse();
        metric += li.adjoint() * li;
      }
      EighResult me = eigh(metric / static_cast<double>(g.gauge.size()));
      Matrix2 white = me.eigenvectors *
                      me.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                      me.eigenvectors.adjoint();
      std::vector<Vector2> whitened;
      for (const auto& s : equispaced_seeds(n_c)) {
        Vector2 w = white * s;
        whitened.push_back(w / w.norm());
      }
      candidates.push_back(std::move(whitened));

      CounterRng rng(0x5eedf4a3);
      for (int k = 0; k < 8; ++k) {
        Matrix2 gmat;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) gmat(i, j) = rng.next_complex_normal();
        Matrix2 q = Eigen::HouseholderQR<Matrix2>(gmat).householderQ();
        std::vector<Vector2> rotated;
        for (const auto& s : equispaced_seeds(n_c)) rotated.push_back(q * s);
        candidates.push_back(std::move(rotated));
      }

      for (const auto& cand : candidates) {
        ProductBasis alt = assemble_basis(h_c, g, cand);
        if (alt.delta(0) > basis.delta(0)) basis = std::move(alt);
      }
    }
  }

  if (n_c > 0 && basis.delta(0) < 1e-12)
    fail(ErrorCode::GramSingular, "product basis is numerically dependent");

  // Kernel membership: every term annihilates every product vector locally.
  for (const auto& [e, op] : h_c.two_spin_terms()) {
    Vector4 beta = beta_of(op);
    int pa = index_of(basis.order, e.a), pb = index_of(basis.order, e.b);
    for (int j = 0; j <= n_c; ++j) {
      Vector4 pair = kron2(basis.site_states[j][pa], basis.site_states[j][pb]);
      if (std::abs(beta.dot(pair)) > 1e-9)
        fail(ErrorCode::Inconsistent,
             "product vector escapes the kernel on edge (" + e.a + "," + e.b + ")");
    }
  }
  return basis;
}

RestrictedObservable restrict_observable(const ProductBasis& basis, const LocalObservable& obs) {
  require_hermitian(obs.matrix);
  const int m = basis.dim();
  const int n_c = static_cast<int>(basis.order.size());

  std::vector<int> support_idx;
  for (const auto& v : obs.support) support_idx.push_back(index_of(basis.order, v));

  ComplexMatrix w(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      Complex env = 1.0;
      for (int site = 0; site < n_c; ++site) {
        if (std::find(support_idx.begin(), support_idx.end(), site) != support_idx.end()) continue;
        env *= basis.site_states[j][site].dot(basis.site_states[k][site]);
      }
      // local factor <(x)_S f_j | op | (x)_S f_k>
      const Eigen::Index dim = obs.matrix.rows();
      ComplexVector xj = ComplexVector::Ones(1), xk = ComplexVector::Ones(1);
      for (int s : support_idx) {
        ComplexVector nj(xj.size() * 2), nk(xk.size() * 2);
        for (Eigen::Index t = 0; t < xj.size(); ++t)
          for (int bit = 0; bit < 2; ++bit) {
            nj(2 * t + bit) = xj(t) * basis.site_states[j][s](bit);
            nk(2 * t + bit) = xk(t) * basis.site_states[k][s](bit);
          }
        xj = std::move(nj);
        xk = std::move(nk);
      }
      if (xj.size() != dim)
        fail(ErrorCode::DimensionMismatch, "observable dimension does not match its support");
      w(j, k) = env * xj.dot(obs.matrix * xk);
    }

  // Orthonormalize: Delta^{-1/2} U+ W U Delta^{-1/2}.
  ComplexMatrix half = basis.u * basis.delta.cwiseSqrt().cwiseInverse().asDiagonal();
  RestrictedObservable out;
  out.matrix = symmetrized(half.adjoint() * w * half);
  return out;
}

LocalObservable pull_back_observable(const TreeTensorNetwork& network, const LocalObservable& obs) {
  LocalObservable cur = obs;
  if (!std::is_sorted(cur.support.begin(), cur.support.end()))
    fail(ErrorCode::InvalidInput, "observable support must be sorted");
  if (cur.matrix.rows() != (Eigen::Index{1} << cur.support.size()))
    fail(ErrorCode::DimensionMismatch, "observable dimension does not match its support");

  for (const auto& node : network.nodes) {
    if (std::holds_alternative<SpinDeletion>(node)) {
      const auto& d = std::get<SpinDeletion>(node);
      auto it = std::find(cur.support.begin(), cur.support.end(), d.vertex);
      if (it == cur.support.end()) continue;
      const int pos = static_cast<int>(it - cur.support.begin());
      const int n = static_cast<int>(cur.support.size());
      const Eigen::Index dim_new = Eigen::Index{1} << (n - 1);
      ComplexMatrix next = ComplexMatrix::Zero(dim_new, dim_new);
      auto splice = [&](Eigen::Index idx, int bit) {
        Eigen::Index hi = idx >> (n - 1 - pos);
        Eigen::Index lo = idx & ((Eigen::Index{1} << (n - 1 - pos)) - 1);
        return (hi << (n - pos)) | (Eigen::Index(bit) << (n - 1 - pos)) | lo;
      };
      for (Eigen::Index r = 0; r < dim_new; ++r)
        for (Eigen::Index c = 0; c < dim_new; ++c)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              next(r, c) += std::conj(d.state(k)) * cur.matrix(splice(r, k), splice(c, l)) *
                            d.state(l);
      cur.support.erase(it);
      cur.matrix = std::move(next);
    } else {
      const auto& c = std::get<TwoSpinContraction>(node);
      bool touch_a = std::binary_search(cur.support.begin(), cur.support.end(), c.edge.a);
      bool touch_b = std::binary_search(cur.support.begin(), cur.support.end(), c.edge.b);
      if (!touch_a && !touch_b) continue;

      // Lift onto axes = support u {a, b}, then contract the pair through U.
      std::vector<VertexId> axes = cur.support;
      if (!touch_a) axes.insert(std::lower_bound(axes.begin(), axes.end(), c.edge.a), c.edge.a);
      if (!touch_b) axes.insert(std::lower_bound(axes.begin(), axes.end(), c.edge.b), c.edge.b);
      const int n = static_cast<int>(axes.size());
      const Eigen::Index dim = Eigen::Index{1} << n;

      std::vector<int> src_pos;  // position of each original support axis
      for (const auto& v : cur.support) src_pos.push_back(index_of(axes, v));
      const int pa = index_of(axes, c.edge.a), pb = index_of(axes, c.edge.b);

      ComplexMatrix lifted = ComplexMatrix::Zero(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index cc = 0; cc < dim; ++cc) {
          bool diag_ok = true;
          for (int q = 0; q < n && diag_ok; ++q) {
            bool in_support =
                std::find(src_pos.begin(), src_pos.end(), q) != src_pos.end();
            if (!in_support && (((r >> (n - 1 - q)) & 1) != ((cc >> (n - 1 - q)) & 1)))
              diag_ok = false;
          }
          if (!diag_ok) continue;
          Eigen::Index ro = 0, co = 0;
          for (int s : src_pos) {
            ro = (ro << 1) | ((r >> (n - 1 - s)) & 1);
            co = (co << 1) | ((cc >> (n - 1 - s)) & 1);
          }
          lifted(r, cc) = cur.matrix(ro, co);
        }

      // new axes: drop the removed spin; survivor carries the encoded index
      std::vector<VertexId> new_axes = axes;
      new_axes.erase(std::find(new_axes.begin(), new_axes.end(), c.removed));
      const int nn = n - 1;
      const Eigen::Index dim_new = Eigen::Index{1} << nn;
      const int ps = index_of(new_axes, c.survivor);
      std::vector<int> carry;  // positions in `axes` of the other new axes
      for (const auto& v : new_axes)
        if (v != c.survivor) carry.push_back(index_of(axes, v));

      ComplexMatrix next = ComplexMatrix::Zero(dim_new, dim_new);
      auto old_index = [&](Eigen::Index idx, int ka, int kb) {
        std::vector<int> bits(n, 0);
        bits[pa] = ka;
        bits[pb] = kb;
        int t = 0;
        for (int q = 0; q < nn; ++q) {
          if (q == ps) continue;
          bits[carry[t++]] = static_cast<int>((idx >> (nn - 1 - q)) & 1);
        }
        Eigen::Index out = 0;
        for (int q = 0; q < n; ++q) out = (out << 1) | bits[q];
        return out;
      };
      for (Eigen::Index r = 0; r < dim_new; ++r) {
        const int ksr = static_cast<int>((r >> (nn - 1 - ps)) & 1);
        for (Eigen::Index cc = 0; cc < dim_new; ++cc) {
          const int ksc = static_cast<int>((cc >> (nn - 1 - ps)) & 1);
          Complex acc = 0.0;
          for (int ka = 0; ka < 2; ++ka)
            for (int kb = 0; kb < 2; ++kb)
              for (int la = 0; la < 2; ++la)
                for (int lb = 0; lb < 2; ++lb)
                  acc += std::conj(c.isometry(2 * ka + kb, ksr)) *
                         lifted(old_index(r, ka, kb), old_index(cc, la, lb)) *
                         c.isometry(2 * la + lb, ksc);
          next(r, cc) = acc;
        }
      }
      cur.support = std::move(new_axes);
      cur.matrix = std::move(next);
    }
  }
  return cur;
}

double expectation_ground_manifold(const Hamiltonian& h, const ReductionResult& reduced,
                                   const LocalObservable& obs, int max_support) {
  if (reduced.frustrated) fail(ErrorCode::FrustratedInput, "ground manifold is empty");
  if (static_cast<int>(obs.support.size()) > max_support)
    fail(ErrorCode::ObservableTooLarge, "observable support exceeds the configured cap");
  for (const auto& v : obs.support)
    if (!h.has_vertex(v)) fail(ErrorCode::InvalidInput, "observable names unknown vertex " + v);
  require_hermitian(obs.matrix);

  LocalObservable pulled = pull_back_observable(reduced.network, obs);
  if (pulled.support.empty()) return pulled.matrix(0, 0).real();

  if (connected_components(reduced.h_c).size() > 1)
    fail(ErrorCode::Inconsistent, "reduced Hamiltonian is not connected");
  GaugeSolution gauge = solve_gauge(reduced.h_c);
  ProductBasis basis = product_basis(reduced.h_c, gauge);
  RestrictedObservable bar = restrict_observable(basis, pulled);
  return bar.matrix.trace().real() / static_cast<double>(basis.dim());
}

}  // namespace qsat
