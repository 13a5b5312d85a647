#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qsat/hamiltonian.hpp"

namespace qsat {

// One spin encoded into two: U = |psi0><0| + |psi1><1|, stored as a 4x2
// matrix in the canonical tensor order of `edge`. psi1 is entangled whenever
// the contracted term admits it (always, for natural terms).
struct TwoSpinContraction {
  VertexId survivor;
  VertexId removed;
  Edge edge;
  ComplexMatrix isometry;  // 4x2
};

struct SpinDeletion {
  VertexId vertex;
  Vector2 state;  // spans ker(h_v)
};

struct ConstraintInduction {
  VertexId a, b, c;  // (a,b) and (b,c) induced a constraint on (a,c)
  Vector4 beta;      // induced unit vector in canonical Edge(a,c) order
};

struct TermAccumulation {
  Edge edge;
  Vector4 beta;
  bool colinear = false;
  int resulting_rank = 0;
};

// Non-natural rank-2 term replaced by its single-spin projector.
struct Substitution {
  Edge edge;
  VertexId vertex;
  Matrix2 op;
};

using TraceStep =
    std::variant<TwoSpinContraction, SpinDeletion, ConstraintInduction, TermAccumulation,
                 Substitution>;

struct ReductionTrace {
  std::vector<TraceStep> steps;
};

// The forest of recorded isometries. Nodes are stored in reduction order;
// replay applies them reversed, growing ker(H_c) into ker(H).
struct TreeTensorNetwork {
  using Node = std::variant<TwoSpinContraction, SpinDeletion>;
  std::vector<Node> nodes;
  std::vector<VertexId> free_inputs;        // sorted spins of H_c
  std::vector<VertexId> original_vertices;  // sorted spins of the input
};

struct FrustrationWitness {
  std::optional<VertexId> vertex;  // full-rank single-spin term
  std::optional<Edge> edge;        // full-rank two-spin term
  std::size_t trace_prefix = 0;
};

struct ReductionResult {
  bool frustrated = false;
  std::optional<FrustrationWitness> witness;
  Hamiltonian h_c;  // meaningful when not frustrated
  TreeTensorNetwork network;
  ReductionTrace trace;
};

struct ReduceOptions {
  // Default policy: deletions before contractions, lexicographically smallest
  // eligible target, sorted induction sweeps. Randomized order (seeded) is
  // used by the order-independence suites.
  bool randomize_order = false;
  uint64_t order_seed = 0;
  // Restrict reductions to these vertices (subsystem analysis); terms crossing
  // the boundary are transformed alongside but never drive a reduction.
  std::optional<std::set<VertexId>> active;
};

struct ContractionOutcome {
  Hamiltonian h;
  TwoSpinContraction step;
};

// Contract edge e (rank 2 or 3); survivor is e.a. A basis override pins
// psi0/psi1 explicitly (golden tests); otherwise psi1 is chosen entangled by
// maximizing the second Schmidt coefficient, and the call fails with
// NoEntangledBasisVector if require_entangled is set but the span admits none.
ContractionOutcome contract_two_spin(
    const Hamiltonian& h, const Edge& e,
    const std::optional<std::pair<Vector4, Vector4>>& basis_override = std::nullopt,
    bool require_entangled = false);

struct DeletionOutcome {
  bool frustrated = false;  // h_v had full rank
  Hamiltonian h;
  SpinDeletion step;
};

DeletionOutcome delete_spin(const Hamiltonian& h, const VertexId& v);

// Induced constraint through the singlet (null when the contraction vanishes).
// Inputs and output are unit vectors in the tensor order (a,b), (b,c), (a,c).
std::optional<Vector4> induce_constraint(const Vector4& beta_ab, const Vector4& beta_bc);

// existing + |beta><beta|, unless existing is rank 1 and colinear with beta
// (fidelity > 1 - 1e-8), which leaves it unchanged.
Matrix4 accumulate_term(const std::optional<Matrix4>& existing, const Vector4& beta,
                        bool* colinear = nullptr);

ReductionResult reduce_to_complete(const Hamiltonian& h, const ReduceOptions& opts = {});

// phi lives on network.free_inputs (sorted order); the result lives on
// network.original_vertices and lies in ker(H) whenever phi is in ker(H_c).
ComplexVector replay_network(const TreeTensorNetwork& network, const ComplexVector& phi);

// Re-applies a recorded trace to the original input; reproduces the reduced
// Hamiltonian bit-for-bit (same arithmetic, same order).
Hamiltonian replay_trace(const Hamiltonian& input, const ReductionTrace& trace);

}  // namespace qsat
