#pragma once

#include <cstddef>

// Low-level array kernels used by the hot paths (stencil application,
// Krylov orthogonalization, elementwise coefficient products).
//
// A scalar reference implementation always exists. On x86-64 an AVX2+FMA
// variant and on AArch64 a NEON variant are compiled in and selected at
// runtime from CPU capabilities; the environment variable ISSNG_KERNELS
// (auto | scalar | avx2 | neon) overrides the selection. The selection is
// resolved once per process, so repeated runs in one environment are
// bit-reproducible. Different implementations associate reductions
// differently and may round differently; cross-implementation agreement is
// covered by equivalence tests at tight relative tolerance, not bitwise.
namespace issng::kernels {

enum class Isa { scalar, avx2, neon };

// The implementation set in use (resolved once, cached).
Isa active();

const char* isa_name(Isa isa);

// dot(x, y) with a fixed deterministic reduction order.
double dot(std::size_t n, const double* x, const double* y);

// Squared Euclidean norm with a fixed deterministic reduction order.
double nrm2sq(std::size_t n, const double* x);

// y += a * x
void axpy(std::size_t n, double a, const double* x, double* y);

// x *= a
void scale(std::size_t n, double a, double* x);

// out += c .* x   (elementwise multiply-accumulate)
void emuladd(std::size_t n, const double* c, const double* x, double* out);

// Negative five-point Laplacian stencil on an m-by-m interior block with
// zero boundary: out = inv_h2 * (4 v - shifts), overwriting out.
void stencil5(int m, double inv_h2, const double* v, double* out);

// Per-implementation entry points, exposed for equivalence testing.
namespace scalar_impl {
double dot(std::size_t n, const double* x, const double* y);
double nrm2sq(std::size_t n, const double* x);
void axpy(std::size_t n, double a, const double* x, double* y);
void scale(std::size_t n, double a, double* x);
void emuladd(std::size_t n, const double* c, const double* x, double* out);
void stencil5(int m, double inv_h2, const double* v, double* out);
}  // namespace scalar_impl

#if defined(ISSNG_WITH_AVX2)
namespace avx2_impl {
double dot(std::size_t n, const double* x, const double* y);
double nrm2sq(std::size_t n, const double* x);
void axpy(std::size_t n, double a, const double* x, double* y);
void scale(std::size_t n, double a, double* x);
void emuladd(std::size_t n, const double* c, const double* x, double* out);
void stencil5(int m, double inv_h2, const double* v, double* out);
bool available();
}  // namespace avx2_impl
#endif

#if defined(ISSNG_WITH_NEON)
namespace neon_impl {
double dot(std::size_t n, const double* x, const double* y);
double nrm2sq(std::size_t n, const double* x);
void axpy(std::size_t n, double a, const double* x, double* y);
void scale(std::size_t n, double a, double* x);
void emuladd(std::size_t n, const double* c, const double* x, double* out);
void stencil5(int m, double inv_h2, const double* v, double* out);
bool available();
}  // namespace neon_impl
#endif

}  // namespace issng::kernels
