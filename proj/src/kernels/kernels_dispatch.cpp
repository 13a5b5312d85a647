#include "qsat/kernels.hpp"

#include "qsat/error.hpp"

namespace qsat::kernels {

namespace detail {
void axpy_scalar(Complex a, const Complex* x, Complex* y, std::size_t n);
void apply_single_site_scalar(const Matrix2& op, Complex* state, int n, int q);
void apply_two_site_scalar(const Matrix4& op, Complex* state, int n, int qa, int qb);
#if defined(__x86_64__) || defined(_M_X64)
void axpy_avx2(Complex a, const Complex* x, Complex* y, std::size_t n);
void apply_single_site_avx2(const Matrix2& op, Complex* state, int n, int q);
void apply_two_site_avx2(const Matrix4& op, Complex* state, int n, int qa, int qb);
#endif
}  // namespace detail

namespace {

bool have_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() { return have_avx2() ? Backend::avx2 : Backend::scalar; }

}  // namespace

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) { return b == Backend::scalar || have_avx2(); }

void axpy(Backend b, Complex a, const Complex* x, Complex* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) {
    detail::axpy_avx2(a, x, y, n);
    return;
  }
#endif
  if (b != Backend::scalar) fail(ErrorCode::InvalidInput, "kernel backend unavailable");
  detail::axpy_scalar(a, x, y, n);
}

void apply_single_site(Backend b, const Matrix2& op, Complex* state, int n, int q) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) {
    detail::apply_single_site_avx2(op, state, n, q);
    return;
  }
#endif
  if (b != Backend::scalar) fail(ErrorCode::InvalidInput, "kernel backend unavailable");
  detail::apply_single_site_scalar(op, state, n, q);
}

void apply_two_site(Backend b, const Matrix4& op, Complex* state, int n, int qa, int qb) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) {
    detail::apply_two_site_avx2(op, state, n, qa, qb);
    return;
  }
#endif
  if (b != Backend::scalar) fail(ErrorCode::InvalidInput, "kernel backend unavailable");
  detail::apply_two_site_scalar(op, state, n, qa, qb);
}

void axpy(Complex a, const Complex* x, Complex* y, std::size_t n) {
  axpy(active_backend(), a, x, y, n);
}

void apply_single_site(const Matrix2& op, Complex* state, int n, int q) {
  apply_single_site(active_backend(), op, state, n, q);
}

void apply_two_site(const Matrix4& op, Complex* state, int n, int qa, int qb) {
  apply_two_site(active_backend(), op, state, n, qa, qb);
}

}  // namespace qsat::kernels
