#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qsat/linalg.hpp"
#include "qsat/types.hpp"

namespace qsat {

// 2-local spin-1/2 Hamiltonian on a graph. Two-spin operators are stored on
// canonical edges (a < b) in tensor order a (x) b; construction symmetrizes,
// accumulates duplicate terms by summation and (by default) rescales every
// term to ground energy zero. Zero terms are dropped.
class Hamiltonian {
 public:
  enum class Normalize { yes, no };

  Hamiltonian() = default;

  void add_vertex(const VertexId& v);
  bool has_vertex(const VertexId& v) const { return vertices_.count(v) > 0; }

  // Accumulates onto any existing term; `op` is given in (u, v) tensor order
  // and is reordered if the canonical edge flips it.
  void add_two_spin(const VertexId& u, const VertexId& v, const Matrix4& op);
  void add_single_spin(const VertexId& v, const Matrix2& op);

  // Applies the normalization policy: symmetrize, rescale each term to zero
  // ground energy (when Normalize::yes), drop negligible terms.
  void finalize(Normalize mode = Normalize::yes);

  const std::set<VertexId>& vertices() const { return vertices_; }
  const std::map<Edge, Matrix4>& two_spin_terms() const { return two_spin_; }
  const std::map<VertexId, Matrix2>& single_spin_terms() const { return single_spin_; }

  int spin_count() const { return static_cast<int>(vertices_.size()); }
  bool empty() const { return two_spin_.empty() && single_spin_.empty(); }

  std::set<Edge> edges() const;
  std::set<VertexId> neighbors(const VertexId& v) const;

  // Mutators used by the reduction engine.
  void set_two_spin(const Edge& e, const Matrix4& op);
  void remove_two_spin(const Edge& e);
  void set_single_spin(const VertexId& v, const Matrix2& op);
  void remove_single_spin(const VertexId& v);
  void remove_vertex(const VertexId& v);  // vertex must carry no terms

  double drop_threshold() const;

 private:
  std::set<VertexId> vertices_;
  std::map<Edge, Matrix4> two_spin_;
  std::map<VertexId, Matrix2> single_spin_;
};

// op reordered from (a,b) to (b,a) tensor order.
Matrix4 swap_sides(const Matrix4& op);

ComplexMatrix rescale_to_zero_ground(const ComplexMatrix& op);

// Orthogonal projector onto img(op); requires min eigenvalue 0 (rescaled input).
Matrix4 projectorize(const Matrix4& op, double tau_rank = default_tols().rank);

void require_rescaled(const ComplexMatrix& op, double tau_rank = default_tols().rank);

struct TermNaturality {
  bool natural = false;
  int rank = 0;
  std::optional<Vector4> witness;  // an entangled excited state when natural
};

// Naturality of a rescaled two-spin term: its image contains an entangled
// vector. Rank 3 always qualifies; rank 1 iff the excited vector is entangled;
// rank 2 fails exactly for |phi><phi| (x) eta shapes (product operators).
TermNaturality classify_naturality(const Matrix4& op, double tau_rank = default_tols().rank);

struct NaturalityReport {
  struct Entry {
    Edge edge;
    TermNaturality verdict;
  };
  std::vector<Entry> terms;
  bool all_terms_natural = true;
  bool connected = true;  // no isolated subsystems
  bool natural() const { return all_terms_natural && connected; }
};

NaturalityReport naturality_report(const Hamiltonian& h);

struct SubstitutedTerm {
  int slot = 0;  // 0: projector lives on edge.a, 1: on edge.b
  Matrix2 op;    // |phi><phi|
};

// Non-natural rank-2 term |phi><phi| (x) eta -> single-spin |phi><phi| on the
// matching endpoint; the two operators have identical two-spin kernels.
SubstitutedTerm substitute_nonnatural_rank2(const Matrix4& op,
                                            double tau_rank = default_tols().rank);

struct ValidationReport {
  bool hermitian_ok = true;
  bool psd_ok = true;        // after rescaling every term has min eigenvalue ~0
  bool structure_ok = true;  // term endpoints exist, no self-loops
  bool connected = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool valid() const { return hermitian_ok && psd_ok && structure_ok; }
};

ValidationReport validate(const Hamiltonian& h);

// Components of the interaction graph (vertices with no terms are singletons).
std::vector<std::set<VertexId>> connected_components(const Hamiltonian& h);

}  // namespace qsat
