#include "issng/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "issng/kernels.hpp"

namespace issng {

namespace {

// True residual norm ||b - A x||, from a fresh operator application.
double true_residual_norm(const LinearOperator& op, const std::vector<double>& b,
                          const std::vector<double>& x,
                          std::vector<double>& scratch) {
  op.apply(x.data(), scratch.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = b[i] - scratch[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

}  // namespace

KrylovOutcome gmres(const LinearOperator& op, const std::vector<double>& b,
                    double tol_rel, std::size_t restart,
                    std::size_t max_iters, const std::vector<double>& x0) {
  const std::size_t dim = op.dim;
  if (b.size() != dim || x0.size() != dim) {
    throw std::invalid_argument("gmres: dimension mismatch");
  }
  if (restart == 0) throw std::invalid_argument("gmres: restart must be positive");

  KrylovOutcome out;
  const double norm_b = std::sqrt(kernels::nrm2sq(dim, b.data()));
  if (norm_b == 0.0) {
    out.solution.assign(dim, 0.0);
    out.converged = true;
    return out;
  }

  const std::size_t r = std::min(restart, dim);
  const std::size_t ld = r + 1;  // leading dimension of column-major H
  // Basis held as r+1 contiguous rows of length dim.
  std::vector<double> V(ld * dim);
  out.peak_alloc_bytes = V.size() * sizeof(double);
  std::vector<double> H(ld * r, 0.0);
  std::vector<double> cs(r, 0.0), sn(r, 0.0), g(ld, 0.0), yk(r, 0.0);
  std::vector<double> scratch(dim);
  auto Hc = [&](std::size_t i, std::size_t j) -> double& { return H[i + ld * j]; };

  std::vector<double> x = x0;
  const double target = tol_rel * norm_b;
  const double accept_slack =
      1.0 + 10.0 * std::numeric_limits<double>::epsilon() *
                static_cast<double>(dim);

  std::size_t total_iters = 0;
  double relres = std::numeric_limits<double>::infinity();

  while (true) {
    // Start (or restart) from the true residual at the current iterate.
    op.apply(x.data(), scratch.data());
    double* v0 = V.data();
    for (std::size_t i = 0; i < dim; ++i) v0[i] = b[i] - scratch[i];
    const double beta = std::sqrt(kernels::nrm2sq(dim, v0));
    relres = beta / norm_b;
    if (beta <= target * accept_slack) {
      out.converged = true;
      break;
    }
    if (total_iters >= max_iters) break;

    kernels::scale(dim, 1.0 / beta, v0);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    std::size_t inner = 0;  // columns completed this cycle
    bool breakdown = false;
    for (std::size_t j = 0; j < r && total_iters < max_iters; ++j) {
      const double* vj = V.data() + j * dim;
      double* w = V.data() + (j + 1) * dim;
      op.apply(vj, w);
      ++total_iters;

      // Modified Gram-Schmidt against all previous basis vectors.
      for (std::size_t i = 0; i <= j; ++i) {
        const double* vi = V.data() + i * dim;
        const double hij = kernels::dot(dim, w, vi);
        Hc(i, j) = hij;
        kernels::axpy(dim, -hij, vi, w);
      }
      const double hsub = std::sqrt(kernels::nrm2sq(dim, w));

      // Previous rotations act on the new column.
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * Hc(i, j) + sn[i] * Hc(i + 1, j);
        Hc(i + 1, j) = -sn[i] * Hc(i, j) + cs[i] * Hc(i + 1, j);
        Hc(i, j) = t;
      }

      // New rotation zeroes the subdiagonal entry.
      const double denom = std::hypot(Hc(j, j), hsub);
      if (denom == 0.0) {
        breakdown = true;  // zero column: nothing new in the subspace
        break;
      }
      cs[j] = Hc(j, j) / denom;
      sn[j] = hsub / denom;
      Hc(j, j) = denom;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      inner = j + 1;
      if (hsub > 0.0) kernels::scale(dim, 1.0 / hsub, w);

      const double recurrence_res = std::abs(g[j + 1]);
      if (hsub == 0.0) {
        breakdown = true;  // invariant subspace: the solve below is exact
        break;
      }
      if (recurrence_res <= target) break;
    }

    if (inner > 0) {
      // Back-substitution on the triangular factor accumulated in H.
      for (std::size_t jj = inner; jj-- > 0;) {
        double acc = g[jj];
        for (std::size_t ii = jj + 1; ii < inner; ++ii) {
          acc -= Hc(jj, ii) * yk[ii];
        }
        yk[jj] = acc / Hc(jj, jj);
      }
      for (std::size_t jj = 0; jj < inner; ++jj) {
        kernels::axpy(dim, yk[jj], V.data() + jj * dim, x.data());
      }
    }

    const double res = true_residual_norm(op, b, x, scratch);
    relres = res / norm_b;
    if (res <= target * accept_slack) {
      out.converged = true;
      break;
    }
    // A breakdown cycle that still misses the target cannot improve further.
    if (breakdown) break;
    if (total_iters >= max_iters) break;
  }

  out.solution = std::move(x);
  out.relative_residual = relres;
  out.iterations = total_iters;
  return out;
}

std::vector<double> dense_solve(const LinearOperator& op,
                                const std::vector<double>& b,
                                std::size_t dim_cap) {
  const std::size_t dim = op.dim;
  if (dim > dim_cap) {
    throw std::invalid_argument("dense_solve: dimension exceeds the cap");
  }
  if (b.size() != dim) {
    throw std::invalid_argument("dense_solve: dimension mismatch");
  }

  // Materialize the operator column by column.
  std::vector<double> A(dim * dim);  // row-major
  std::vector<double> e(dim, 0.0), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    op.apply(e.data(), col.data());
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) A[i * dim + j] = col[i];
  }

  // LU with partial pivoting, solving in place.
  std::vector<double> x = b;
  std::vector<std::size_t> piv(dim);
  for (std::size_t i = 0; i < dim; ++i) piv[i] = i;

  for (std::size_t k = 0; k < dim; ++k) {
    std::size_t best = k;
    double best_abs = std::abs(A[piv[k] * dim + k]);
    for (std::size_t i = k + 1; i < dim; ++i) {
      const double a = std::abs(A[piv[i] * dim + k]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs == 0.0) {
      throw std::runtime_error("dense_solve: singular matrix");
    }
    std::swap(piv[k], piv[best]);
    const double pivval = A[piv[k] * dim + k];
    for (std::size_t i = k + 1; i < dim; ++i) {
      double& lik = A[piv[i] * dim + k];
      lik /= pivval;
      const double factor = lik;
      for (std::size_t j = k + 1; j < dim; ++j) {
        A[piv[i] * dim + j] -= factor * A[piv[k] * dim + j];
      }
    }
  }

  // Forward substitution (unit lower), then back substitution.
  std::vector<double> yv(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double acc = x[piv[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= A[piv[i] * dim + j] * yv[j];
    yv[i] = acc;
  }
  std::vector<double> sol(dim);
  for (std::size_t i = dim; i-- > 0;) {
    double acc = yv[i];
    for (std::size_t j = i + 1; j < dim; ++j) acc -= A[piv[i] * dim + j] * sol[j];
    sol[i] = acc / A[piv[i] * dim + i];
  }
  return sol;
}

}  // namespace issng
