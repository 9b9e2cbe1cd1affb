#include "issng/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "issng/kernels.hpp"

namespace issng {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace

GridFunction project_control(const GridFunction& p, double alpha,
                             const Bounds& b) {
  if (!(alpha > 0)) throw std::invalid_argument("project_control: alpha must be positive");
  GridFunction out{p.grid, std::vector<double>(p.values.size())};
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    double v = p.values[i] / alpha;
    if (v < b.lower) v = b.lower;
    if (v > b.upper) v = b.upper;
    out.values[i] = v;
  }
  return out;
}

GridFunction projection_mask(const GridFunction& p, double alpha,
                             const Bounds& b) {
  if (!(alpha > 0)) throw std::invalid_argument("projection_mask: alpha must be positive");
  GridFunction out{p.grid, std::vector<double>(p.values.size())};
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double v = p.values[i] / alpha;
    out.values[i] = (b.lower < v && v < b.upper) ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> residual(const ProblemInstance& inst, const State& z) {
  require_same_grid(inst.grid, z.y.grid, "residual");
  require_same_grid(inst.grid, z.p.grid, "residual");
  const std::size_t half = inst.grid.interior_count();
  std::vector<double> F(2 * half);

  // r_y = -lap(y) + S(y) - clamp(p/alpha) - f
  kernels::stencil5(inst.grid.m, 1.0 / (inst.grid.h * inst.grid.h),
                    z.y.values.data(), F.data());
  for (std::size_t i = 0; i < half; ++i) {
    double u = z.p.values[i] / inst.alpha;
    if (u < inst.bounds.lower) u = inst.bounds.lower;
    if (u > inst.bounds.upper) u = inst.bounds.upper;
    F[i] += inst.nl.s(z.y.values[i]) - u - inst.f.values[i];
  }

  // r_p = -lap(p) + S'(y) p + y - yd
  kernels::stencil5(inst.grid.m, 1.0 / (inst.grid.h * inst.grid.h),
                    z.p.values.data(), F.data() + half);
  for (std::size_t i = 0; i < half; ++i) {
    F[half + i] += inst.nl.s1(z.y.values[i]) * z.p.values[i] + z.y.values[i] -
                   inst.yd.values[i];
  }
  return F;
}

SlantCoeffs make_slant_coeffs(const ProblemInstance& inst, const State& z) {
  require_same_grid(inst.grid, z.y.grid, "make_slant_coeffs");
  require_same_grid(inst.grid, z.p.grid, "make_slant_coeffs");
  const std::size_t half = inst.grid.interior_count();
  SlantCoeffs co;
  co.grid = inst.grid;
  co.alpha = inst.alpha;
  co.s1y.resize(half);
  co.s2yp.resize(half);
  co.neg_mask_over_alpha.resize(half);
  for (std::size_t i = 0; i < half; ++i) {
    co.s1y[i] = inst.nl.s1(z.y.values[i]);
    co.s2yp[i] = inst.nl.s2(z.y.values[i]) * z.p.values[i];
    const double v = z.p.values[i] / inst.alpha;
    const bool interior = inst.bounds.lower < v && v < inst.bounds.upper;
    co.neg_mask_over_alpha[i] = interior ? -1.0 / inst.alpha : 0.0;
  }
  return co;
}

void apply_slant(const SlantCoeffs& co, const double* d, double* out) {
  const std::size_t half = co.grid.interior_count();
  const double inv_h2 = 1.0 / (co.grid.h * co.grid.h);
  const double* dy = d;
  const double* dp = d + half;

  // top = -lap(dy) + S'(y).*dy + (-mask/alpha).*dp
  kernels::stencil5(co.grid.m, inv_h2, dy, out);
  kernels::emuladd(half, co.s1y.data(), dy, out);
  kernels::emuladd(half, co.neg_mask_over_alpha.data(), dp, out);

  // bottom = dy + (S''(y).*p).*dy - lap(dp) + S'(y).*dp
  double* bot = out + half;
  kernels::stencil5(co.grid.m, inv_h2, dp, bot);
  kernels::axpy(half, 1.0, dy, bot);
  kernels::emuladd(half, co.s2yp.data(), dy, bot);
  kernels::emuladd(half, co.s1y.data(), dp, bot);
}

void apply_slant_transpose(const SlantCoeffs& co, const double* w,
                           double* out) {
  const std::size_t half = co.grid.interior_count();
  const double inv_h2 = 1.0 / (co.grid.h * co.grid.h);
  const double* wy = w;
  const double* wp = w + half;

  // The diagonal blocks (-lap + diag(S'(y))) are symmetric; the off-diagonal
  // diagonal blocks trade places under transposition.
  // top = -lap(wy) + S'(y).*wy + wp + (S''(y).*p).*wp
  kernels::stencil5(co.grid.m, inv_h2, wy, out);
  kernels::emuladd(half, co.s1y.data(), wy, out);
  kernels::axpy(half, 1.0, wp, out);
  kernels::emuladd(half, co.s2yp.data(), wp, out);

  // bottom = (-mask/alpha).*wy - lap(wp) + S'(y).*wp
  double* bot = out + half;
  kernels::stencil5(co.grid.m, inv_h2, wp, bot);
  kernels::emuladd(half, co.neg_mask_over_alpha.data(), wy, bot);
  kernels::emuladd(half, co.s1y.data(), wp, bot);
}

std::vector<double> apply_slant(const ProblemInstance& inst, const State& z,
                                const std::vector<double>& d) {
  const SlantCoeffs co = make_slant_coeffs(inst, z);
  if (d.size() != 2 * inst.grid.interior_count()) {
    throw std::invalid_argument("apply_slant: direction has wrong length");
  }
  std::vector<double> out(d.size());
  apply_slant(co, d.data(), out.data());
  return out;
}

std::vector<double> apply_slant_transpose(const ProblemInstance& inst,
                                          const State& z,
                                          const std::vector<double>& w) {
  const SlantCoeffs co = make_slant_coeffs(inst, z);
  if (w.size() != 2 * inst.grid.interior_count()) {
    throw std::invalid_argument("apply_slant_transpose: vector has wrong length");
  }
  std::vector<double> out(w.size());
  apply_slant_transpose(co, w.data(), out.data());
  return out;
}

double merit(const ProblemInstance& inst, const State& z) {
  const std::vector<double> F = residual(inst, z);
  return 0.5 * kernels::nrm2sq(F.size(), F.data());
}

std::vector<double> merit_gradient(const ProblemInstance& inst,
                                   const State& z) {
  return apply_slant_transpose(inst, z, residual(inst, z));
}

State state_from_vector(const Grid& g, const std::vector<double>& z) {
  const std::size_t half = g.interior_count();
  if (z.size() != 2 * half) {
    throw std::invalid_argument("state_from_vector: wrong length");
  }
  State s{GridFunction{g, std::vector<double>(z.begin(), z.begin() + half)},
          GridFunction{g, std::vector<double>(z.begin() + half, z.end())}};
  return s;
}

std::vector<double> vector_from_state(const State& z) {
  std::vector<double> out;
  out.reserve(z.y.values.size() + z.p.values.size());
  out.insert(out.end(), z.y.values.begin(), z.y.values.end());
  out.insert(out.end(), z.p.values.begin(), z.p.values.end());
  return out;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace issng
