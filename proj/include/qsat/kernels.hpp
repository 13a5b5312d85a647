#pragma once

#include <cstddef>

#include "qsat/types.hpp"

// Dense state-vector kernels behind the oracle and network replay. Each kernel
// has a scalar reference implementation and an AVX2 variant selected once at
// runtime; both compute the same operation with identical rounding (no FMA
// contraction), so equivalence tests compare bitwise.
//
// Qubit convention: qubit 0 is the most significant bit of the basis index
// (tensor order v0 (x) v1 (x) ... (x) v_{n-1}), so qubit q has stride
// 2^(n-1-q).

namespace qsat::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool backend_available(Backend b);

// y += a * x, length n.
void axpy(Complex a, const Complex* x, Complex* y, std::size_t n);

// In-place |psi> <- (op on qubit q) |psi> for an n-qubit state of 2^n amplitudes.
void apply_single_site(const Matrix2& op, Complex* state, int n, int q);

// In-place |psi> <- (op on qubits qa, qb) |psi>, qa != qb; op indexed
// 2*bit_qa + bit_qb.
void apply_two_site(const Matrix4& op, Complex* state, int n, int qa, int qb);

// Forced-backend entry points (used by the equivalence tests).
void axpy(Backend b, Complex a, const Complex* x, Complex* y, std::size_t n);
void apply_single_site(Backend b, const Matrix2& op, Complex* state, int n, int q);
void apply_two_site(Backend b, const Matrix4& op, Complex* state, int n, int qa, int qb);

// Dense matrix accumulation m += lift(op), m column-major 2^n x 2^n. The
// lifted operator has only 4 nonzero rows per column, so these stay scalar.
void accumulate_single_site(const Matrix2& op, Complex* m, int n, int q);
void accumulate_two_site(const Matrix4& op, Complex* m, int n, int qa, int qb);

}  // namespace qsat::kernels
