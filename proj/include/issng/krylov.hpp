#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace issng {

// A matrix-free square linear operator.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(const double* in, double* out)> apply;
};

struct KrylovOutcome {
  std::vector<double> solution;
  double relative_residual = 0.0;  // true residual norm / ||b||
  std::size_t iterations = 0;      // total operator applications (excluding
                                   // the per-cycle residual refresh)
  bool converged = false;
  std::size_t peak_alloc_bytes = 0;  // basis storage allocated by this solve
};

// Restarted GMRES with modified Gram-Schmidt orthogonalization and Givens
// least squares. Terminates when the true relative residual (recomputed from
// the operator, not the recurrence) drops to tol_rel, or when max_iters
// total operator applications are spent. A zero right-hand side returns the
// zero solution immediately. On breakdown with a solved system the outcome
// is converged. Deterministic: identical inputs give bit-identical outputs.
KrylovOutcome gmres(const LinearOperator& op, const std::vector<double>& b,
                    double tol_rel, std::size_t restart,
                    std::size_t max_iters, const std::vector<double>& x0);

// Dense direct solve used as a test and benchmark oracle: materializes the
// operator column by column and runs LU with partial pivoting. Guarded by a
// dimension cap; throws std::invalid_argument above it and
// std::runtime_error on numerical singularity.
std::vector<double> dense_solve(const LinearOperator& op,
                                const std::vector<double>& b,
                                std::size_t dim_cap = 2048);

}  // namespace issng
