#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "issng/problem.hpp"

namespace issng {

// issng_l: inexact Newton with the nonmonotone backtracking line search.
// issng:   the fixed-step variant (delta = 1 every iteration, no search).
enum class Variant { issng_l, issng };

struct SolverConfig {
  double c1 = 0.5;        // sufficient-decrease coefficient
  double theta = 0.5;     // backtracking factor
  double delta0 = 1.0;    // initial trial stepsize
  double eta0 = 0.5;      // forcing term at the first iteration
  double eta_max = 0.9;   // upper clamp for forcing terms
  double gamma = 0.9;     // forcing-term scale
  double a1 = 2.0;        // forcing-term exponent
  double tol = 1e-8;      // stopping tolerance on the residual ratio
  double eta_floor = 1e-12;  // lower clamp keeping the inner tolerance
                             // strictly positive
  std::size_t max_newton = 100;
  std::size_t max_backtracks = 50;
  std::size_t window = 0;  // nonmonotone memory length; 0 means unbounded
  Variant variant = Variant::issng_l;
  std::size_t restart = 150;        // GMRES restart length (capped by dim)
  std::size_t gmres_max_iters = 0;  // total operator applications; 0 -> 10*dim
};

// Diagnostics for one accepted outer iteration k (1-based): the forcing term
// and inner-solve statistics of the step that produced z_k, and the residual
// norms, stopping ratio, and merit evaluated at z_k.
struct IterationRecord {
  std::size_t k = 0;
  double norm_F = 0;
  double norm_ry = 0;
  double norm_rp = 0;
  double eta = 0;
  std::size_t gmres_iters = 0;
  double gmres_relres = 0;
  double delta = 0;
  std::size_t backtracks = 0;
  double tau = 0;
  double merit = 0;
};

struct SolveReport {
  bool converged = false;
  std::vector<IterationRecord> iterations;
  State final_state;
  GridFunction final_control;
  double wall_time = 0.0;  // seconds
  std::string failure_reason;  // empty on success; otherwise one of
                               // "gmres_nonconvergence", "linesearch_failure",
                               // "max_newton", "non_finite_state",
                               // "descent_violation"
  std::size_t peak_krylov_bytes = 0;
};

// Forcing term for outer iteration k. k = 0 returns eta0. For k >= 1 the
// value is gamma * (||F_k|| / denom)^a1 with denom = ||F_0|| when k = 1 and
// denom = max(||F_1||, ..., ||F_{k-1}||) otherwise, clamped into
// [eta_floor, eta_max]. norm_history must hold ||F_0|| .. ||F_k||.
double forcing_term(std::size_t k, const std::vector<double>& norm_history,
                    const SolverConfig& cfg);

// tau_k = (||r_y^k|| + ||r_p^k||) / max(1, ||r_y^0|| + ||r_p^0||).
double stopping_ratio(double norm_ry_k, double norm_rp_k, double norm_ry_0,
                      double norm_rp_0);

struct LinesearchResult {
  double delta = 0;
  std::size_t backtracks = 0;
  double accepted_merit = 0;
  bool ok = false;
  // The accepted trial's data, so the caller can reuse instead of
  // re-evaluating: residual at z + delta*d and its split norms.
  std::vector<double> residual;
  double norm_ry = 0;
  double norm_rp = 0;
};

// Backtracks delta over {delta0, theta*delta0, ...} until
//   Q(z + delta d) <= M + c1 * delta * gradQ_dot_d,
// where M is the max over the last `window` entries of merit_history
// (all entries when window = 0). Non-finite trial merits count as rejected
// trials. ok = false when max_backtracks is exhausted.
LinesearchResult nonmonotone_linesearch(const ProblemInstance& inst,
                                        const State& z,
                                        const std::vector<double>& d,
                                        double gradQ_dot_d,
                                        const std::vector<double>& merit_history,
                                        const SolverConfig& cfg);

// Full outer loop: stopping test, forcing term, inner GMRES solve of
// G(z_k) d = -F(z_k) to relative tolerance eta_k, step acceptance (line
// search for issng_l, delta = 1 for issng; the search is skipped at k = 0
// where the nonmonotone reference memory is empty), state update, and
// per-iteration records. The direction's residual contract and descent are
// re-verified each iteration from a recomputed G d.
SolveReport solve(const ProblemInstance& inst, const State& z0,
                  const SolverConfig& cfg);

}  // namespace issng
