#include "qsat/kernels.hpp"

namespace qsat::kernels::detail {

void axpy_scalar(Complex a, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void apply_single_site_scalar(const Matrix2& op, Complex* state, int n, int q) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t stride = std::size_t{1} << (n - 1 - q);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & stride) continue;
    Complex x0 = state[base];
    Complex x1 = state[base + stride];
    state[base] = op(0, 0) * x0 + op(0, 1) * x1;
    state[base + stride] = op(1, 0) * x0 + op(1, 1) * x1;
  }
}

void apply_two_site_scalar(const Matrix4& op, Complex* state, int n, int qa, int qb) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t sa = std::size_t{1} << (n - 1 - qa);
  const std::size_t sb = std::size_t{1} << (n - 1 - qb);
  for (std::size_t base = 0; base < dim; ++base) {
    if ((base & sa) || (base & sb)) continue;
    Complex x[4] = {state[base], state[base + sb], state[base + sa], state[base + sa + sb]};
    for (int k = 0; k < 4; ++k) {
      Complex acc = op(k, 0) * x[0];
      acc += op(k, 1) * x[1];
      acc += op(k, 2) * x[2];
      acc += op(k, 3) * x[3];
      std::size_t idx = base + (k & 2 ? sa : 0) + (k & 1 ? sb : 0);
      state[idx] = acc;
    }
  }
}

}  // namespace qsat::kernels::detail

namespace qsat::kernels {

void accumulate_single_site(const Matrix2& op, Complex* m, int n, int q) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t stride = std::size_t{1} << (n - 1 - q);
  for (std::size_t col = 0; col < dim; ++col) {
    const int kc = (col & stride) ? 1 : 0;
    const std::size_t base = col & ~stride;
    m[base + col * dim] += op(0, kc);
    m[base + stride + col * dim] += op(1, kc);
  }
}

void accumulate_two_site(const Matrix4& op, Complex* m, int n, int qa, int qb) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t sa = std::size_t{1} << (n - 1 - qa);
  const std::size_t sb = std::size_t{1} << (n - 1 - qb);
  for (std::size_t col = 0; col < dim; ++col) {
    const int kc = ((col & sa) ? 2 : 0) + ((col & sb) ? 1 : 0);
    const std::size_t base = col & ~(sa | sb);
    for (int kr = 0; kr < 4; ++kr) {
      std::size_t row = base + (kr & 2 ? sa : 0) + (kr & 1 ? sb : 0);
      m[row + col * dim] += op(kr, kc);
    }
  }
}

}  // namespace qsat::kernels
