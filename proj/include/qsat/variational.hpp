#pragma once

#include "qsat/ground_space.hpp"

namespace qsat {

// H = H0 + lambda * H1 with frustration-free H0; the variational energy is the
// exact minimum of <Phi|H|Phi> over the ground manifold M of H0, an upper
// bound on the true ground energy. H1 is stored un-rescaled (arbitrary sign
// spectrum); H0 vanishes on M.
struct PerturbedProblem {
  Hamiltonian h0;
  Hamiltonian h1;
  double lambda = 0.0;
};

struct VariationalResult {
  double energy = 0.0;
  ComplexVector coefficients;  // minimizer in the orthonormal manifold basis
  int manifold_dim = 0;
};

// Restriction of H1 to M at unit coupling, in the orthonormalized product
// basis of the reduced Hamiltonian.
ComplexMatrix restrict_perturbation(const Hamiltonian& h0, const ReductionResult& reduced,
                                    const Hamiltonian& h1);

VariationalResult variational_energy(const PerturbedProblem& prob);

}  // namespace qsat
