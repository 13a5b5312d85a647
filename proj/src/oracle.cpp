#include "qsat/oracle.hpp"

#include <algorithm>

#include "qsat/kernels.hpp"

namespace qsat {

namespace {

int qubit_of(const std::vector<VertexId>& order, const VertexId& v) {
  auto it = std::lower_bound(order.begin(), order.end(), v);
  if (it == order.end() || *it != v) fail(ErrorCode::InvalidInput, "vertex not in order: " + v);
  return static_cast<int>(it - order.begin());
}

}  // namespace

DenseHamiltonian build_full(const Hamiltonian& h, int max_spins) {
  DenseHamiltonian d;
  d.n = h.spin_count();
  if (d.n > max_spins)
    fail(ErrorCode::TooLarge, "dense oracle capped at " + std::to_string(max_spins) + " spins");
  d.order.assign(h.vertices().begin(), h.vertices().end());
  const Eigen::Index dim = Eigen::Index{1} << d.n;
  d.matrix = ComplexMatrix::Zero(dim, dim);
  for (const auto& [edge, op] : h.two_spin_terms())
    kernels::accumulate_two_site(op, d.matrix.data(), d.n, qubit_of(d.order, edge.a),
                                 qubit_of(d.order, edge.b));
  for (const auto& [v, op] : h.single_spin_terms())
    kernels::accumulate_single_site(op, d.matrix.data(), d.n, qubit_of(d.order, v));
  return d;
}

GroundData ground_data(const DenseHamiltonian& d, double tau) {
  GroundData g;
  EighResult es = eigh(d.matrix);
  const Eigen::Index dim = d.matrix.rows();
  g.e0 = es.eigenvalues(0);
  g.norm = std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(dim - 1)));
  const double thresh = tau * g.norm;
  Eigen::Index count = 0;
  while (count < dim && es.eigenvalues(count) <= thresh) ++count;
  g.kernel_dim = static_cast<int>(count);
  g.frustration_free = g.e0 <= thresh;
  g.ground_basis = es.eigenvectors.leftCols(count);
  return g;
}

OracleVerdict quick_verdict(const DenseHamiltonian& d, double tau) {
  OracleVerdict v;
  RealVector w = eigh_values(d.matrix);
  const Eigen::Index dim = w.size();
  v.e0 = w(0);
  v.norm = std::max(std::abs(w(0)), std::abs(w(dim - 1)));
  const double thresh = tau * v.norm;
  Eigen::Index count = 0;
  while (count < dim && w(count) <= thresh) ++count;
  v.kernel_dim = static_cast<int>(count);
  v.frustration_free = v.e0 <= thresh;
  return v;
}

double ground_energy(const DenseHamiltonian& d) { return eigh_values(d.matrix)(0); }

int schmidt_rank_across(const ComplexVector& psi, const std::vector<int>& a_positions, int n,
                        double tau) {
  std::vector<bool> in_a(n, false);
  for (int q : a_positions) in_a[q] = true;
  int na = static_cast<int>(a_positions.size());
  int nb = n - na;
  // Keep the SVD on the smaller side.
  bool flip = na > nb;
  if (flip) {
    std::swap(na, nb);
    in_a.flip();
  }
  const Eigen::Index rows = Eigen::Index{1} << na;
  const Eigen::Index cols = Eigen::Index{1} << nb;
  ComplexMatrix c(rows, cols);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Eigen::Index r = 0, s = 0;
    for (int q = 0; q < n; ++q) {
      int bit = static_cast<int>((i >> (n - 1 - q)) & 1);
      if (in_a[q])
        r = (r << 1) | bit;
      else
        s = (s << 1) | bit;
    }
    c(r, s) = psi(i);
  }
  Eigen::BDCSVD<ComplexMatrix> svd(c);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > tau) ++rank;
  return rank;
}

ComplexVector apply_local(const ComplexMatrix& op, const std::vector<VertexId>& support,
                          const std::vector<VertexId>& order, const ComplexVector& psi) {
  const int n = static_cast<int>(order.size());
  ComplexVector out = psi;
  if (support.size() == 1) {
    if (op.rows() != 2) fail(ErrorCode::DimensionMismatch, "single-spin operator must be 2x2");
    kernels::apply_single_site(Matrix2(op), out.data(), n, qubit_of(order, support[0]));
  } else if (support.size() == 2) {
    if (op.rows() != 4) fail(ErrorCode::DimensionMismatch, "two-spin operator must be 4x4");
    kernels::apply_two_site(Matrix4(op), out.data(), n, qubit_of(order, support[0]),
                            qubit_of(order, support[1]));
  } else {
    fail(ErrorCode::ObservableTooLarge, "apply_local handles one- and two-spin supports");
  }
  return out;
}

double max_term_residual(const Hamiltonian& h, const std::vector<VertexId>& order,
                         const ComplexVector& psi) {
  double worst = 0.0;
  for (const auto& [edge, op] : h.two_spin_terms())
    worst = std::max(worst, apply_local(op, {edge.a, edge.b}, order, psi).norm());
  for (const auto& [v, op] : h.single_spin_terms())
    worst = std::max(worst, apply_local(op, {v}, order, psi).norm());
  return worst;
}

double ground_manifold_expectation(const GroundData& gd, const std::vector<VertexId>& order,
                                   const ComplexMatrix& op, const std::vector<VertexId>& support) {
  if (gd.kernel_dim == 0) fail(ErrorCode::FrustratedInput, "no zero eigenspace");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < gd.ground_basis.cols(); ++j) {
    ComplexVector v = gd.ground_basis.col(j);
    acc += v.dot(apply_local(op, support, order, v)).real();
  }
  return acc / static_cast<double>(gd.kernel_dim);
}

}  // namespace qsat
