#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qsat/ground_space.hpp"
#include "qsat/reduction.hpp"

namespace qsat {

using Json = nlohmann::json;

// Model format: {"vertices": [..], "edges": [{"a":..,"b":..,"matrix":[[re,im] x16]}],
// "singles": [{"v":..,"matrix":[[re,im] x4]}]}. Matrices are row-major in the
// canonical (a < b) tensor order; Hermiticity is re-validated on load.
Json hamiltonian_to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const Json& j,
                                  Hamiltonian::Normalize mode = Hamiltonian::Normalize::yes);

// {"support": ["v", ...], "matrix": [[re,im] x 4^m]}, support sorted.
Json observable_to_json(const LocalObservable& obs);
LocalObservable observable_from_json(const Json& j);

Json trace_to_json(const ReductionTrace& trace);
ReductionTrace trace_from_json(const Json& j);

Json reduction_result_to_json(const ReductionResult& r);
ReductionResult reduction_result_from_json(const Json& j);

Hamiltonian load_hamiltonian(const std::string& path,
                             Hamiltonian::Normalize mode = Hamiltonian::Normalize::yes);
LocalObservable load_observable(const std::string& path);
void write_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

}  // namespace qsat
