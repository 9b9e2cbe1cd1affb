#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "issng/grid.hpp"

namespace issng {

// Pointwise nonlinearity of the state equation together with its first two
// derivatives, all applied elementwise.
struct Nonlinearity {
  std::function<double(double)> s;   // S
  std::function<double(double)> s1;  // S'
  std::function<double(double)> s2;  // S''
  std::string label;
};

// Pointwise control bounds; either side may be infinite.
struct Bounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// One discrete control problem: grid, nonlinearity, control bounds,
// regularization weight, forcing field f, and target field yd.
struct ProblemInstance {
  Grid grid;
  Nonlinearity nl;
  Bounds bounds;
  double alpha = 1e-3;
  GridFunction f;
  GridFunction yd;
};

// State and adjoint fields; the stacked unknown is z = [y; p].
struct State {
  GridFunction y;
  GridFunction p;
};

// Elementwise clamp of p/alpha into [lower, upper].
GridFunction project_control(const GridFunction& p, double alpha,
                             const Bounds& b);

// Derivative pattern of project_control: 1 where lower < p_i/alpha < upper,
// 0 otherwise (ties at a bound count as 0).
GridFunction projection_mask(const GridFunction& p, double alpha,
                             const Bounds& b);

// Nonlinear residual of the coupled first-order system, stacked [r_y; r_p]:
//   r_y = -lap(y) + S(y) - clamp(p/alpha) - f
//   r_p = -lap(p) + S'(y) p + y - yd
// Non-finite intermediates propagate into the output (callers treat them as
// a diagnostic condition); no exception is thrown for them.
std::vector<double> residual(const ProblemInstance& inst, const State& z);

// Coefficient fields of the linearization at a fixed iterate, precomputed
// once so that repeated operator applications inside a Krylov solve touch
// no std::function.
struct SlantCoeffs {
  Grid grid;
  double alpha = 0;
  std::vector<double> s1y;       // S'(y)
  std::vector<double> s2yp;      // S''(y) .* p
  std::vector<double> neg_mask_over_alpha;  // -mask/alpha
};

SlantCoeffs make_slant_coeffs(const ProblemInstance& inst, const State& z);

// out = G d where G is the linearized-system operator
//   [ -lap + diag(S'(y))        diag(-mask/alpha)   ]
//   [ I + diag(S''(y) .* p)     -lap + diag(S'(y))  ]
// d and out have length 2 m^2; no matrix is assembled.
void apply_slant(const SlantCoeffs& co, const double* d, double* out);

// out = G^T w (transpose action; the Laplacian blocks are symmetric, the
// off-diagonal diagonal blocks swap).
void apply_slant_transpose(const SlantCoeffs& co, const double* w,
                           double* out);

// Convenience wrappers that build the coefficients on the fly.
std::vector<double> apply_slant(const ProblemInstance& inst, const State& z,
                                const std::vector<double>& d);
std::vector<double> apply_slant_transpose(const ProblemInstance& inst,
                                          const State& z,
                                          const std::vector<double>& w);

// Q(z) = 0.5 * ||residual(z)||^2 (plain Euclidean norm).
double merit(const ProblemInstance& inst, const State& z);

// grad Q(z) = G(z)^T residual(z).
std::vector<double> merit_gradient(const ProblemInstance& inst,
                                   const State& z);

// Helpers shared by solver and tests.
State state_from_vector(const Grid& g, const std::vector<double>& z);
std::vector<double> vector_from_state(const State& z);
bool all_finite(const std::vector<double>& v);

}  // namespace issng
