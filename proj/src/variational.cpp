#include "qsat/variational.hpp"

namespace qsat {

ComplexMatrix restrict_perturbation(const Hamiltonian& h0, const ReductionResult& reduced,
                                    const Hamiltonian& h1) {
  if (reduced.frustrated) fail(ErrorCode::FrustratedInput, "H0 is frustrated");
  for (const auto& v : h1.vertices())
    if (!h0.has_vertex(v))
      fail(ErrorCode::InvalidInput, "perturbation names unknown vertex " + v);

  const int n_c = reduced.h_c.spin_count();
  const int m = n_c + 1;

  std::optional<GaugeSolution> gauge;
  std::optional<ProductBasis> basis;
  auto ensure_basis = [&]() {
    if (basis) return;
    if (connected_components(reduced.h_c).size() > 1)
      fail(ErrorCode::Inconsistent, "reduced Hamiltonian is not connected");
    gauge = solve_gauge(reduced.h_c);
    basis = product_basis(reduced.h_c, *gauge);
  };

  ComplexMatrix hbar = ComplexMatrix::Zero(m, m);
  auto add_term = [&](const LocalObservable& obs) {
    LocalObservable pulled = pull_back_observable(reduced.network, obs);
    if (pulled.support.empty()) {
      hbar += pulled.matrix(0, 0).real() * ComplexMatrix::Identity(m, m);
      return;
    }
    ensure_basis();
    hbar += restrict_observable(*basis, pulled).matrix;
  };

  for (const auto& [e, op] : h1.two_spin_terms()) add_term({{e.a, e.b}, op});
  for (const auto& [v, op] : h1.single_spin_terms()) add_term({{v}, op});
  return symmetrized(hbar);
}

VariationalResult variational_energy(const PerturbedProblem& prob) {
  auto reduced = reduce_to_complete(prob.h0);
  ComplexMatrix hbar1 = restrict_perturbation(prob.h0, reduced, prob.h1);

  EighResult es = eigh(prob.lambda * hbar1);
  VariationalResult out;
  out.manifold_dim = static_cast<int>(hbar1.rows());
  out.energy = es.eigenvalues(0);
  out.coefficients = es.eigenvectors.col(0);
  return out;
}

}  // namespace qsat
