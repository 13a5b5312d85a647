#include "qsat/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace qsat {

namespace {

constexpr double kTiny = 1e-12;

// Column-major Hermitian eigensolve, values ascending.
void zheevd_inplace(ComplexMatrix& a, RealVector& w, char jobz) {
  const int n = static_cast<int>(a.rows());
  w.resize(n);
  if (n == 0) return;
  // std::complex<double> is layout-compatible with the C99 complex LAPACKE uses.
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) fail(ErrorCode::InvalidInput, "zheevd failed, info=" + std::to_string(info));
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double tau_herm) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tau_herm;
}

void require_hermitian(const ComplexMatrix& m, double tau_herm) {
  if (!is_hermitian(m, tau_herm)) fail(ErrorCode::NotHermitian, "matrix is not Hermitian");
}

ComplexMatrix symmetrized(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

EighResult eigh(const ComplexMatrix& m) {
  EighResult r;
  ComplexMatrix a = symmetrized(m);
  zheevd_inplace(a, r.eigenvalues, 'V');
  r.eigenvectors = std::move(a);
  return r;
}

RealVector eigh_values(const ComplexMatrix& m) {
  ComplexMatrix a = symmetrized(m);
  RealVector w;
  zheevd_inplace(a, w, 'N');
  return w;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0) return 0.0;
  RealVector w = eigh_values(m);
  return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

ComplexVector phase_fixed(const ComplexVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kTiny * scale) {
      Complex phase = std::conj(v(i)) / std::abs(v(i));
      return phase * v;
    }
  }
  return v;
}

std::vector<ComplexVector> kernel_basis(const ComplexMatrix& m, double tau_rank) {
  require_hermitian(m);
  EighResult r = eigh(m);
  const int n = static_cast<int>(m.rows());
  const double norm = r.eigenvalues.size() ? std::max(std::abs(r.eigenvalues(0)),
                                                      std::abs(r.eigenvalues(n - 1)))
                                           : 0.0;
  const double thresh = tau_rank * norm;
  if (r.eigenvalues.size() && r.eigenvalues(0) < -thresh)
    fail(ErrorCode::NotPSD, "operator has a negative eigenvalue beyond tolerance");

  std::vector<ComplexVector> basis;
  for (int k = 0; k < n; ++k)
    if (std::abs(r.eigenvalues(k)) <= thresh) basis.push_back(phase_fixed(r.eigenvectors.col(k)));

  std::stable_sort(basis.begin(), basis.end(),
                   [](const ComplexVector& x, const ComplexVector& y) {
                     double ox = std::abs(x(0)), oy = std::abs(y(0));
                     if (ox != oy) return ox > oy;
                     for (Eigen::Index i = 0; i < x.size(); ++i) {
                       if (x(i).real() != y(i).real()) return x(i).real() > y(i).real();
                       if (x(i).imag() != y(i).imag()) return x(i).imag() > y(i).imag();
                     }
                     return false;
                   });
  return basis;
}

int operator_rank(const ComplexMatrix& m, double tau_rank) {
  require_hermitian(m);
  RealVector w = eigh_values(m);
  if (w.size() == 0) return 0;
  const double norm = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  const double thresh = tau_rank * norm;
  int rank = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (std::abs(w(k)) > thresh) ++rank;
  return rank;
}

Vector4 SchmidtDecomposition::recombine() const {
  Vector4 psi = Vector4::Zero();
  for (size_t r = 0; r < coefficients.size(); ++r)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) psi(2 * i + j) += coefficients[r] * left[r](i) * right[r](j);
  return psi;
}

SchmidtDecomposition schmidt_decompose(const Vector4& psi) {
  Matrix2 c;
  c << psi(0), psi(1), psi(2), psi(3);
  Eigen::JacobiSVD<Matrix2> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtDecomposition d;
  for (int r = 0; r < 2; ++r) {
    d.coefficients.push_back(svd.singularValues()(r));
    d.left.push_back(svd.matrixU().col(r));
    d.right.push_back(svd.matrixV().col(r).conjugate());
  }
  return d;
}

bool is_product_state(const Vector4& psi, double tau) {
  return schmidt_decompose(psi).coefficients[1] <= tau;
}

double entanglement_det(const Vector4& psi) {
  return std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

std::optional<ProductOperatorFactors> product_operator_factors(const Matrix4& eta, double tau) {
  require_hermitian(eta);
  // Realignment: R[(2i+k),(2j+l)] = eta[(2i+j),(2k+l)]; rank 1 iff eta = A (x) B.
  Matrix4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = eta(2 * i + j, 2 * k + l);

  Eigen::JacobiSVD<Matrix4> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s0 = svd.singularValues()(0);
  if (s0 <= 0.0) return ProductOperatorFactors{Matrix2::Zero(), Matrix2::Zero()};
  if (svd.singularValues()(1) > tau * s0) return std::nullopt;

  Vector4 a = svd.matrixU().col(0) * s0;
  Vector4 b = svd.matrixV().col(0).conjugate();
  Matrix2 ma, mb;
  ma << a(0), a(1), a(2), a(3);
  mb << b(0), b(1), b(2), b(3);

  // The SVD fixes A, B only up to a phase; rotate so both come out Hermitian.
  int p = 0, q = 0;
  ma.cwiseAbs().maxCoeff(&p, &q);
  Complex ratio = std::conj(ma(q, p)) / ma(p, q);
  Complex phase = std::sqrt(ratio / std::abs(ratio));
  ma *= phase;
  mb /= phase;
  ma = 0.5 * (ma + ma.adjoint());
  mb = 0.5 * (mb + mb.adjoint());
  if (ma.trace().real() < 0) {
    ma = -ma;
    mb = -mb;
  }
  return ProductOperatorFactors{ma, mb};
}

bool is_product_operator(const Matrix4& eta, double tau) {
  return product_operator_factors(eta, tau).has_value();
}

Matrix2 partial_contraction(const Vector4& psi, const Vector4& phi) {
  Matrix2 m = Matrix2::Zero();
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m(c, a) += std::conj(psi(2 * a + b)) * phi(2 * b + c);
  return m;
}

EntangledSearchResult most_entangled_in_span(const std::vector<Vector4>& raw_basis) {
  if (raw_basis.empty()) fail(ErrorCode::InvalidInput, "empty span");

  // Orthonormalize so that unit coefficient vectors map to unit states.
  ComplexMatrix span(4, raw_basis.size());
  for (size_t i = 0; i < raw_basis.size(); ++i) span.col(i) = raw_basis[i];
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(span);
  qr.setThreshold(1e-10);
  const int k = static_cast<int>(qr.rank());
  if (k == 0) fail(ErrorCode::InvalidInput, "span of zero vectors");
  ComplexMatrix qfull = qr.householderQ() * ComplexMatrix::Identity(4, k);
  std::vector<Vector4> basis(k);
  for (int i = 0; i < k; ++i) basis[i] = qfull.col(i);

  // det(sum_i x_i C_i) is a quadratic form x^T Q x in the coefficients; its
  // max modulus over unit x is the top Takagi value of the symmetric Q.
  auto reshape = [](const Vector4& v) {
    Matrix2 c;
    c << v(0), v(1), v(2), v(3);
    return c;
  };
  auto det2 = [](const Matrix2& c) { return c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0); };

  ComplexMatrix q = ComplexMatrix::Zero(k, k);
  std::vector<Matrix2> cs(k);
  for (int i = 0; i < k; ++i) cs[i] = reshape(basis[i]);
  for (int i = 0; i < k; ++i) {
    q(i, i) = det2(cs[i]);
    for (int j = i + 1; j < k; ++j) {
      Complex cross = det2(cs[i] + cs[j]) - det2(cs[i]) - det2(cs[j]);
      q(i, j) = q(j, i) = 0.5 * cross;
    }
  }

  // Top Takagi vector of the symmetric form via its real embedding: con-eigen
  // pairs Q conj(x) = sigma x correspond to eigenpairs of [[A,B],[B,-A]] with
  // Q = A + iB. The maximizing coefficient vector is conj(x).
  Eigen::MatrixXd emb(2 * k, 2 * k);
  emb.topLeftCorner(k, k) = q.real();
  emb.topRightCorner(k, k) = q.imag();
  emb.bottomLeftCorner(k, k) = q.imag();
  emb.bottomRightCorner(k, k) = -q.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(emb);
  Eigen::VectorXd top = es.eigenvectors().col(2 * k - 1);
  ComplexVector x(k);
  for (int i = 0; i < k; ++i) x(i) = Complex(top(i), -top(k + i));

  Vector4 v = Vector4::Zero();
  for (int i = 0; i < k; ++i) v += x(i) * basis[i];
  double nv = v.norm();
  if (nv > 0.0) v /= nv;
  EntangledSearchResult r;
  r.vector = v;
  r.det_value = entanglement_det(v);
  return r;
}

ComplexMatrix image_projector(const ComplexMatrix& m, double tau_rank) {
  EighResult r = eigh(m);
  const int n = static_cast<int>(m.rows());
  const double norm = n ? std::max(std::abs(r.eigenvalues(0)), std::abs(r.eigenvalues(n - 1))) : 0.0;
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (int kk = 0; kk < n; ++kk)
    if (std::abs(r.eigenvalues(kk)) > tau_rank * norm)
      p += r.eigenvectors.col(kk) * r.eigenvectors.col(kk).adjoint();
  return p;
}

Vector4 kron2(const Vector2& a, const Vector2& b) {
  Vector4 v;
  v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return v;
}

Matrix4 kron2(const Matrix2& a, const Matrix2& b) {
  Matrix4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

ComplexMatrix projector(const ComplexVector& x) { return x * x.adjoint(); }

Vector4 singlet() {
  Vector4 s;
  s << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  return s;
}

}  // namespace qsat
