// AVX2 variants of the state-vector kernels. Two complex doubles per 256-bit
// lane; multiplies use mul+addsub only (no FMA), so results are bit-identical
// to the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "qsat/kernels.hpp"

namespace qsat::kernels::detail {

void axpy_scalar(Complex a, const Complex* x, Complex* y, std::size_t n);
void apply_single_site_scalar(const Matrix2& op, Complex* state, int n, int q);
void apply_two_site_scalar(const Matrix4& op, Complex* state, int n, int qa, int qb);

namespace {

// acc + x*(br + i*bi) with br, bi broadcast: addsub realizes the sign split
// between real and imaginary parts.
inline __m256d cmul_acc(__m256d acc, __m256d x, __m256d br, __m256d bi) {
  __m256d t1 = _mm256_mul_pd(x, br);
  __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(x, 0x5), bi);
  return _mm256_add_pd(acc, _mm256_addsub_pd(t1, t2));
}

inline __m256d cmul(__m256d x, __m256d br, __m256d bi) {
  __m256d t1 = _mm256_mul_pd(x, br);
  __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(x, 0x5), bi);
  return _mm256_addsub_pd(t1, t2);
}

inline double* as_d(Complex* p) { return reinterpret_cast<double*>(p); }
inline const double* as_d(const Complex* p) { return reinterpret_cast<const double*>(p); }

}  // namespace

void axpy_avx2(Complex a, const Complex* x, Complex* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(as_d(x + i));
    __m256d yv = _mm256_loadu_pd(as_d(y + i));
    _mm256_storeu_pd(as_d(y + i), cmul_acc(yv, xv, ar, ai));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void apply_single_site_avx2(const Matrix2& op, Complex* state, int n, int q) {
  const std::size_t stride = std::size_t{1} << (n - 1 - q);
  if (stride < 2) {  // target qubit is the fastest index; groups interleave
    apply_single_site_scalar(op, state, n, q);
    return;
  }
  const std::size_t dim = std::size_t{1} << n;
  __m256d re[2][2], im[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      re[r][c] = _mm256_set1_pd(op(r, c).real());
      im[r][c] = _mm256_set1_pd(op(r, c).imag());
    }
  for (std::size_t base = 0; base < dim; base += 2) {
    if (base & stride) continue;
    __m256d x0 = _mm256_loadu_pd(as_d(state + base));
    __m256d x1 = _mm256_loadu_pd(as_d(state + base + stride));
    __m256d y0 = cmul_acc(cmul(x0, re[0][0], im[0][0]), x1, re[0][1], im[0][1]);
    __m256d y1 = cmul_acc(cmul(x0, re[1][0], im[1][0]), x1, re[1][1], im[1][1]);
    _mm256_storeu_pd(as_d(state + base), y0);
    _mm256_storeu_pd(as_d(state + base + stride), y1);
  }
}

void apply_two_site_avx2(const Matrix4& op, Complex* state, int n, int qa, int qb) {
  const std::size_t sa = std::size_t{1} << (n - 1 - qa);
  const std::size_t sb = std::size_t{1} << (n - 1 - qb);
  if (sa < 2 || sb < 2) {
    apply_two_site_scalar(op, state, n, qa, qb);
    return;
  }
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t base = 0; base < dim; base += 2) {
    if ((base & sa) || (base & sb)) continue;
    __m256d x[4];
    x[0] = _mm256_loadu_pd(as_d(state + base));
    x[1] = _mm256_loadu_pd(as_d(state + base + sb));
    x[2] = _mm256_loadu_pd(as_d(state + base + sa));
    x[3] = _mm256_loadu_pd(as_d(state + base + sa + sb));
    for (int k = 0; k < 4; ++k) {
      __m256d acc = cmul(x[0], _mm256_set1_pd(op(k, 0).real()), _mm256_set1_pd(op(k, 0).imag()));
      for (int l = 1; l < 4; ++l)
        acc = cmul_acc(acc, x[l], _mm256_set1_pd(op(k, l).real()),
                       _mm256_set1_pd(op(k, l).imag()));
      std::size_t idx = base + (k & 2 ? sa : 0) + (k & 1 ? sb : 0);
      _mm256_storeu_pd(as_d(state + idx), acc);
    }
  }
}

}  // namespace qsat::kernels::detail

#endif  // x86_64
