#pragma once

#include <optional>
#include <vector>

#include "qsat/error.hpp"
#include "qsat/types.hpp"

namespace qsat {

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
// LAPACKE zheevd under the hood; the input is symmetrized first.
struct EighResult {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};
EighResult eigh(const ComplexMatrix& m);

// Eigenvalues only (ascending); much faster at oracle sizes.
RealVector eigh_values(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m);  // largest |eigenvalue|, Hermitian input

bool is_hermitian(const ComplexMatrix& m, double tau_herm = default_tols().herm);
void require_hermitian(const ComplexMatrix& m, double tau_herm = default_tols().herm);
ComplexMatrix symmetrized(const ComplexMatrix& m);

// Rotates the global phase so the first nonzero amplitude is real positive.
ComplexVector phase_fixed(const ComplexVector& v);

// Orthonormal basis of the (near-)null space of a PSD Hermitian operator.
// Vectors are phase-fixed and ordered descending by |v[0]| for reproducible
// traces. Throws NotHermitian / NotPSD.
std::vector<ComplexVector> kernel_basis(const ComplexMatrix& m,
                                        double tau_rank = default_tols().rank);

int operator_rank(const ComplexMatrix& m, double tau_rank = default_tols().rank);

struct SchmidtDecomposition {
  // Coefficients descending; psi = sum_r mu[r] |left[r]> (x) |right[r]>.
  std::vector<double> coefficients;
  std::vector<Vector2> left;
  std::vector<Vector2> right;

  Vector4 recombine() const;
};

// Two-qubit state, index convention 2*i_a + i_b.
SchmidtDecomposition schmidt_decompose(const Vector4& psi);

bool is_product_state(const Vector4& psi, double tau = default_tols().rank);

// mu1 * mu2 of the normalized state: zero iff product, maximal 1/2.
double entanglement_det(const Vector4& psi);

struct ProductOperatorFactors {
  Matrix2 left;
  Matrix2 right;
};

// Operator-Schmidt (realignment) rank-1 test for a Hermitian 4x4 operator.
// Factors returned are Hermitian with eta ~= left (x) right.
std::optional<ProductOperatorFactors> product_operator_factors(
    const Matrix4& eta, double tau = default_tols().rank);
bool is_product_operator(const Matrix4& eta, double tau = default_tols().rank);

// (<psi| (x) 1)(1 (x) |phi>) for two-qubit psi on (a,b), phi on (b,c);
// the returned 2x2 maps H_a -> H_c, M(c,a) = sum_b conj(psi[2a+b]) phi[2b+c].
Matrix2 partial_contraction(const Vector4& psi, const Vector4& phi);

// Most-entangled unit vector in span{basis}: maximizes mu1*mu2 (equivalently
// the second Schmidt coefficient) via the determinant quadratic form of the
// reshaped span. Returns the vector and its mu1*mu2 value; the value is zero
// (within tolerance) iff every vector in the span is a product state.
struct EntangledSearchResult {
  Vector4 vector;
  double det_value;
};
EntangledSearchResult most_entangled_in_span(const std::vector<Vector4>& basis);

// Projector onto the image (nonzero eigenspaces) of a PSD Hermitian operator.
ComplexMatrix image_projector(const ComplexMatrix& m, double tau_rank = default_tols().rank);

Vector4 kron2(const Vector2& a, const Vector2& b);
Matrix4 kron2(const Matrix2& a, const Matrix2& b);

// |x><x| as a dense matrix.
ComplexMatrix projector(const ComplexVector& x);

Vector4 singlet();  // (|01> - |10>)/sqrt(2)

}  // namespace qsat
