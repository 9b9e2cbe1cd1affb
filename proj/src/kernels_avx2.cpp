#include <immintrin.h>

#include <cstddef>

#include "issng/kernels.hpp"

// AVX2+FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; callers reach it through the runtime dispatch in
// kernels.cpp, which checks CPU support first.

namespace issng::kernels::avx2_impl {

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// Horizontal sum of a 4-lane double register with a fixed combination
// order: (a0 + a2) + (a1 + a3).
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swap = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swap));
}

}  // namespace

double dot(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

double nrm2sq(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return hsum(acc) + tail;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, double* x) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void emuladd(std::size_t n, const double* c, const double* x, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(_mm256_loadu_pd(c + i),
                                      _mm256_loadu_pd(x + i),
                                      _mm256_loadu_pd(out + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] += c[i] * x[i];
}

void stencil5(int m, double inv_h2, const double* v, double* out) {
  const std::size_t mm = static_cast<std::size_t>(m);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d ih2 = _mm256_set1_pd(inv_h2);
  for (int j = 0; j < m; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * mm;
    const bool has_down = j > 0;
    const bool has_up = j + 1 < m;
    // Interior columns i in [1, m-2] vectorize; the two edge columns are
    // scalar (their horizontal neighbor is a boundary zero).
    {
      const std::size_t idx = row;
      double acc = 4.0 * v[idx];
      if (m > 1) acc -= v[idx + 1];
      if (has_down) acc -= v[idx - mm];
      if (has_up) acc -= v[idx + mm];
      out[idx] = inv_h2 * acc;
    }
    int i = 1;
    for (; i + 4 <= m - 1; i += 4) {
      const std::size_t idx = row + static_cast<std::size_t>(i);
      __m256d acc = _mm256_mul_pd(four, _mm256_loadu_pd(v + idx));
      acc = _mm256_sub_pd(acc, _mm256_loadu_pd(v + idx - 1));
      acc = _mm256_sub_pd(acc, _mm256_loadu_pd(v + idx + 1));
      if (has_down) acc = _mm256_sub_pd(acc, _mm256_loadu_pd(v + idx - mm));
      if (has_up) acc = _mm256_sub_pd(acc, _mm256_loadu_pd(v + idx + mm));
      _mm256_storeu_pd(out + idx, _mm256_mul_pd(ih2, acc));
    }
    for (; i < m - 1; ++i) {
      const std::size_t idx = row + static_cast<std::size_t>(i);
      double acc = 4.0 * v[idx] - v[idx - 1] - v[idx + 1];
      if (has_down) acc -= v[idx - mm];
      if (has_up) acc -= v[idx + mm];
      out[idx] = inv_h2 * acc;
    }
    if (m > 1) {
      const std::size_t idx = row + static_cast<std::size_t>(m - 1);
      double acc = 4.0 * v[idx] - v[idx - 1];
      if (has_down) acc -= v[idx - mm];
      if (has_up) acc -= v[idx + mm];
      out[idx] = inv_h2 * acc;
    }
  }
}

}  // namespace issng::kernels::avx2_impl
