#include <arm_neon.h>

#include <cstddef>

#include "issng/kernels.hpp"

// NEON kernel variants for AArch64 builds (2-lane double vectors). Compiled
// only when the target supports them; reached through the runtime dispatch
// in kernels.cpp.

namespace issng::kernels::neon_impl {

bool available() {
#if defined(__aarch64__)
  return true;  // AdvSIMD is mandatory on AArch64
#else
  return false;
#endif
}

double dot(std::size_t n, const double* x, const double* y) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1) + tail;
}

double nrm2sq(std::size_t n, const double* x) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1) + tail;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, double* x) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(av, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void emuladd(std::size_t n, const double* c, const double* x, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i,
              vfmaq_f64(vld1q_f64(out + i), vld1q_f64(c + i), vld1q_f64(x + i)));
  }
  for (; i < n; ++i) out[i] += c[i] * x[i];
}

void stencil5(int m, double inv_h2, const double* v, double* out) {
  const std::size_t mm = static_cast<std::size_t>(m);
  const float64x2_t four = vdupq_n_f64(4.0);
  const float64x2_t ih2 = vdupq_n_f64(inv_h2);
  for (int j = 0; j < m; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * mm;
    const bool has_down = j > 0;
    const bool has_up = j + 1 < m;
    {
      const std::size_t idx = row;
      double acc = 4.0 * v[idx];
      if (m > 1) acc -= v[idx + 1];
      if (has_down) acc -= v[idx - mm];
      if (has_up) acc -= v[idx + mm];
      out[idx] = inv_h2 * acc;
    }
    int i = 1;
    for (; i + 2 <= m - 1; i += 2) {
      const std::size_t idx = row + static_cast<std::size_t>(i);
      float64x2_t acc = vmulq_f64(four, vld1q_f64(v + idx));
      acc = vsubq_f64(acc, vld1q_f64(v + idx - 1));
      acc = vsubq_f64(acc, vld1q_f64(v + idx + 1));
      if (has_down) acc = vsubq_f64(acc, vld1q_f64(v + idx - mm));
      if (has_up) acc = vsubq_f64(acc, vld1q_f64(v + idx + mm));
      vst1q_f64(out + idx, vmulq_f64(ih2, acc));
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

}  // namespace issng::kernels::neon_impl
