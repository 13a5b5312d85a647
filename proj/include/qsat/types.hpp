#pragma once

#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace qsat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;
using RealVector = Eigen::VectorXd;

using VertexId = std::string;

// Undirected edge, stored canonically with a < b (lexicographic). Two-spin
// operators on an edge act on C^2_a (x) C^2_b in that order, basis index
// 2*bit_a + bit_b.
struct Edge {
  VertexId a;
  VertexId b;

  Edge() = default;
  Edge(VertexId u, VertexId v) {
    if (v < u) std::swap(u, v);
    a = std::move(u);
    b = std::move(v);
  }

  bool contains(const VertexId& v) const { return v == a || v == b; }
  VertexId other(const VertexId& v) const { return v == a ? b : a; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Shared numerical policy. Rank decisions are relative to the operator norm,
// Hermiticity checks are absolute on the max entry deviation.
struct Tolerances {
  double rank = 1e-9;
  double herm = 1e-10;
  double norm = 1e-9;
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

}  // namespace qsat
