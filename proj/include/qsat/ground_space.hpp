#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qsat/reduction.hpp"

namespace qsat {

// Invertible single-spin operators transforming every constraint of a natural
// complete homogeneous Hamiltonian to the singlet form:
//   <beta_uv| = lambda_uv <Psi^-| (L_u (x) L_v).
// Normalization: det(L_v) = 1 (principal branch), L_anchor = identity.
struct GaugeSolution {
  VertexId anchor;
  std::map<VertexId, Matrix2> gauge;
  std::map<Edge, Complex> scale;
};

GaugeSolution solve_gauge(const Hamiltonian& h_c);

// Columns W_0 .. W_n: normalized uniform superpositions by Hamming weight.
ComplexMatrix symmetric_basis(int n_c);

// Product spanning set of ker(H_c): site states L_v^{-1}|alpha_j> for pairwise
// independent seeds (site states unit-normalized; this rescales each basis
// vector by a positive factor).
struct ProductBasis {
  std::vector<VertexId> order;  // sorted spins of H_c
  std::vector<Vector2> seeds;
  std::vector<std::vector<Vector2>> site_states;  // [j][site]

  // Gram data of the product vectors: gram = U diag(delta) U+.
  ComplexMatrix gram;
  ComplexMatrix u;
  RealVector delta;

  int dim() const { return static_cast<int>(seeds.size()); }  // n_c + 1
};

ProductBasis product_basis(const Hamiltonian& h_c, const GaugeSolution& g,
                           const std::optional<std::vector<Vector2>>& seeds = std::nullopt);

// Observable on a sorted support, matrix in that tensor order. An empty
// support means a 1x1 scalar.
struct LocalObservable {
  std::vector<VertexId> support;
  ComplexMatrix matrix;
};

// Restriction to ker(H_c) in the orthonormalized product basis.
struct RestrictedObservable {
  ComplexMatrix matrix;  // (n_c+1) x (n_c+1), Hermitian for Hermitian input
};

RestrictedObservable restrict_observable(const ProductBasis& basis, const LocalObservable& obs);

// T+ Omega T through the recorded isometries; the support never grows.
LocalObservable pull_back_observable(const TreeTensorNetwork& network,
                                     const LocalObservable& obs);

// <Omega> in the maximally mixed state over the ground manifold of H, via the
// reduction result: pull back, restrict, trace / (n_c + 1).
double expectation_ground_manifold(const Hamiltonian& h, const ReductionResult& reduced,
                                   const LocalObservable& obs, int max_support = 4);

}  // namespace qsat
