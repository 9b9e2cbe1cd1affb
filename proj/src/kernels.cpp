#include "issng/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace issng::kernels {

namespace scalar_impl {

double dot(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double nrm2sq(std::size_t n, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void emuladd(std::size_t n, const double* c, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] += c[i] * x[i];
}

void stencil5(int m, double inv_h2, const double* v, double* out) {
  const std::size_t mm = static_cast<std::size_t>(m);
  for (int j = 0; j < m; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * mm;
    for (int i = 0; i < m; ++i) {
      const std::size_t idx = row + static_cast<std::size_t>(i);
      double acc = 4.0 * v[idx];
      if (i > 0) acc -= v[idx - 1];
      if (i + 1 < m) acc -= v[idx + 1];
      if (j > 0) acc -= v[idx - mm];
      if (j + 1 < m) acc -= v[idx + mm];
      out[idx] = inv_h2 * acc;
    }
  }
}

}  // namespace scalar_impl

namespace {

Isa resolve() {
  const char* env = std::getenv("ISSNG_KERNELS");
  const std::string pick = env ? env : "auto";
  if (pick == "scalar") return Isa::scalar;
#if defined(ISSNG_WITH_AVX2)
  if (pick == "avx2") return avx2_impl::available() ? Isa::avx2 : Isa::scalar;
#endif
#if defined(ISSNG_WITH_NEON)
  if (pick == "neon") return neon_impl::available() ? Isa::neon : Isa::scalar;
#endif
  // "auto" or unrecognized value: best available.
#if defined(ISSNG_WITH_AVX2)
  if (avx2_impl::available()) return Isa::avx2;
#endif
#if defined(ISSNG_WITH_NEON)
  if (neon_impl::available()) return Isa::neon;
#endif
  return Isa::scalar;
}

}  // namespace

Isa active() {
  static const Isa isa = resolve();
  return isa;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

double dot(std::size_t n, const double* x, const double* y) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: return avx2_impl::dot(n, x, y);
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: return neon_impl::dot(n, x, y);
#endif
    default: return scalar_impl::dot(n, x, y);
  }
}

double nrm2sq(std::size_t n, const double* x) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: return avx2_impl::nrm2sq(n, x);
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: return neon_impl::nrm2sq(n, x);
#endif
    default: return scalar_impl::nrm2sq(n, x);
  }
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: avx2_impl::axpy(n, a, x, y); return;
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: neon_impl::axpy(n, a, x, y); return;
#endif
    default: scalar_impl::axpy(n, a, x, y); return;
  }
}

void scale(std::size_t n, double a, double* x) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: avx2_impl::scale(n, a, x); return;
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: neon_impl::scale(n, a, x); return;
#endif
    default: scalar_impl::scale(n, a, x); return;
  }
}

void emuladd(std::size_t n, const double* c, const double* x, double* out) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: avx2_impl::emuladd(n, c, x, out); return;
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: neon_impl::emuladd(n, c, x, out); return;
#endif
    default: scalar_impl::emuladd(n, c, x, out); return;
  }
}

void stencil5(int m, double inv_h2, const double* v, double* out) {
  switch (active()) {
#if defined(ISSNG_WITH_AVX2)
    case Isa::avx2: avx2_impl::stencil5(m, inv_h2, v, out); return;
#endif
#if defined(ISSNG_WITH_NEON)
    case Isa::neon: neon_impl::stencil5(m, inv_h2, v, out); return;
#endif
    default: scalar_impl::stencil5(m, inv_h2, v, out); return;
  }
}

}  // namespace issng::kernels
