#pragma once

#include <vector>

#include "qsat/hamiltonian.hpp"

namespace qsat {

// Brute-force dense exact diagonalization, the ground truth the pipeline is
// checked against. Qubit order: sorted vertices, vertex 0 most significant.
struct DenseHamiltonian {
  int n = 0;
  std::vector<VertexId> order;
  ComplexMatrix matrix;  // 2^n x 2^n
};

DenseHamiltonian build_full(const Hamiltonian& h, int max_spins = 14);

struct GroundData {
  double e0 = 0.0;
  double norm = 0.0;        // largest |eigenvalue|
  int kernel_dim = 0;       // eigenvalues <= tau * norm
  bool frustration_free = false;
  ComplexMatrix ground_basis;  // orthonormal columns spanning the zero space
};

// Full eigendecomposition with ground basis.
GroundData ground_data(const DenseHamiltonian& d, double tau = default_tols().rank);

// Eigenvalues-only verdict (much faster at oracle sizes).
struct OracleVerdict {
  double e0 = 0.0;
  double norm = 0.0;
  int kernel_dim = 0;
  bool frustration_free = false;
};
OracleVerdict quick_verdict(const DenseHamiltonian& d, double tau = default_tols().rank);

double ground_energy(const DenseHamiltonian& d);

// Number of singular values > tau across the cut defined by the subset A of
// qubit positions (0-based, most-significant-first convention).
int schmidt_rank_across(const ComplexVector& psi, const std::vector<int>& a_positions, int n,
                        double tau = default_tols().rank);

// (op on `support`) |psi> for an n-qubit dense state; support must have one or
// two vertices from `order`.
ComplexVector apply_local(const ComplexMatrix& op, const std::vector<VertexId>& support,
                          const std::vector<VertexId>& order, const ComplexVector& psi);

// max over terms of ||h_term |psi>||; zero for kernel states.
double max_term_residual(const Hamiltonian& h, const std::vector<VertexId>& order,
                         const ComplexVector& psi);

// tr(P0 Omega) / tr(P0) over the zero eigenspace.
double ground_manifold_expectation(const GroundData& gd, const std::vector<VertexId>& order,
                                   const ComplexMatrix& op, const std::vector<VertexId>& support);

}  // namespace qsat
