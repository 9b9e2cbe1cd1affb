#include "issng/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "issng/kernels.hpp"
#include "issng/krylov.hpp"

namespace issng {

namespace {

double split_norm(const std::vector<double>& F, std::size_t half, double* nry,
                  double* nrp) {
  *nry = std::sqrt(kernels::nrm2sq(half, F.data()));
  *nrp = std::sqrt(kernels::nrm2sq(half, F.data() + half));
  return std::sqrt(*nry * *nry + *nrp * *nrp);
}

double history_max(const std::vector<double>& hist, std::size_t window) {
  const std::size_t take =
      (window == 0 || window >= hist.size()) ? hist.size() : window;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = hist.size() - take; i < hist.size(); ++i) {
    m = std::max(m, hist[i]);
  }
  return m;
}

}  // namespace

double forcing_term(std::size_t k, const std::vector<double>& norm_history,
                    const SolverConfig& cfg) {
  if (norm_history.empty()) {
    throw std::invalid_argument("forcing_term: empty norm history");
  }
  double eta;
  if (k == 0) {
    eta = cfg.eta0;
  } else {
    if (norm_history.size() < k + 1) {
      throw std::invalid_argument("forcing_term: history shorter than k+1");
    }
    double denom;
    if (k == 1) {
      denom = norm_history[0];
    } else {
      denom = 0.0;
      for (std::size_t j = 1; j + 1 <= k; ++j) {
        denom = std::max(denom, norm_history[j]);
      }
    }
    if (denom <= 0.0) return cfg.eta_floor;
    eta = cfg.gamma * std::pow(norm_history[k] / denom, cfg.a1);
    eta = std::min(eta, cfg.eta_max);
  }
  return std::max(eta, cfg.eta_floor);
}

double stopping_ratio(double norm_ry_k, double norm_rp_k, double norm_ry_0,
                      double norm_rp_0) {
  const double denom = std::max(1.0, norm_ry_0 + norm_rp_0);
  return (norm_ry_k + norm_rp_k) / denom;
}

LinesearchResult nonmonotone_linesearch(const ProblemInstance& inst,
                                        const State& z,
                                        const std::vector<double>& d,
                                        double gradQ_dot_d,
                                        const std::vector<double>& merit_history,
                                        const SolverConfig& cfg) {
  if (merit_history.empty()) {
    throw std::invalid_argument("nonmonotone_linesearch: empty merit history");
  }
  const std::size_t half = inst.grid.interior_count();
  const double M = history_max(merit_history, cfg.window);

  LinesearchResult res;
  State trial{GridFunction{z.y.grid, std::vector<double>(half)},
              GridFunction{z.p.grid, std::vector<double>(half)}};
  double delta = cfg.delta0;
  for (std::size_t backs = 0; backs <= cfg.max_backtracks; ++backs) {
    for (std::size_t i = 0; i < half; ++i) {
      trial.y.values[i] = z.y.values[i] + delta * d[i];
      trial.p.values[i] = z.p.values[i] + delta * d[half + i];
    }
    std::vector<double> Ft = residual(inst, trial);
    double nry, nrp;
    const double nF = split_norm(Ft, half, &nry, &nrp);
    const double Qt = 0.5 * nF * nF;
    const bool finite = std::isfinite(Qt);
    if (finite && Qt <= M + cfg.c1 * delta * gradQ_dot_d) {
      res.delta = delta;
      res.backtracks = backs;
      res.accepted_merit = Qt;
      res.ok = true;
      res.residual = std::move(Ft);
      res.norm_ry = nry;
      res.norm_rp = nrp;
      return res;
    }
    delta *= cfg.theta;
  }
  res.ok = false;
  return res;
}

SolveReport solve(const ProblemInstance& inst, const State& z0,
                  const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const std::size_t half = inst.grid.interior_count();
  const std::size_t dim = 2 * half;

  auto finish = [&](State&& state) {
    rep.final_state = std::move(state);
    rep.final_control =
        project_control(rep.final_state.p, inst.alpha, inst.bounds);
    rep.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  };

  State z = z0;  // working iterate
  std::vector<double> F = residual(inst, z);
  if (!all_finite(F)) {
    rep.failure_reason = "non_finite_state";
    finish(std::move(z));
    return rep;
  }

  double nry, nrp;
  double nF = split_norm(F, half, &nry, &nrp);
  const double nry0 = nry, nrp0 = nrp;
  double tau = stopping_ratio(nry, nrp, nry0, nrp0);

  std::vector<double> norm_hist{nF};
  std::vector<double> merit_hist{0.5 * nF * nF};

  // A start that already satisfies the stopping test costs no inner solves.
  if (nF == 0.0 || tau <= cfg.tol) {
    rep.converged = true;
    finish(std::move(z));
    return rep;
  }

  std::vector<double> b(dim), Gd(dim);

  for (std::size_t k = 0; k < cfg.max_newton; ++k) {
    const double eta = forcing_term(k, norm_hist, cfg);

    const SlantCoeffs co = make_slant_coeffs(inst, z);
    LinearOperator G{dim, [&co](const double* in, double* out) {
                       apply_slant(co, in, out);
                     }};
    for (std::size_t i = 0; i < dim; ++i) b[i] = -F[i];
    const std::size_t maxit =
        cfg.gmres_max_iters > 0 ? cfg.gmres_max_iters : 10 * dim;
    const KrylovOutcome kry =
        gmres(G, b, eta, cfg.restart, maxit, std::vector<double>(dim, 0.0));
    rep.peak_krylov_bytes = std::max(rep.peak_krylov_bytes, kry.peak_alloc_bytes);
    if (!kry.converged) {
      rep.failure_reason = "gmres_nonconvergence";
      finish(std::move(z));
      return rep;
    }
    const std::vector<double>& d = kry.solution;

    // Re-verify the inner-solve contract independently of the Krylov
    // recurrence, and compute the directional derivative grad Q . d =
    // (G^T F) . d = F . (G d) from the same application.
    apply_slant(co, d.data(), Gd.data());
    double lin_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double risid = F[i] + Gd[i];
      lin_sq += risid * risid;
    }
    const double lin_norm = std::sqrt(lin_sq);
    if (lin_norm > eta * nF * (1.0 + 1e-10)) {
      rep.failure_reason = "gmres_nonconvergence";
      finish(std::move(z));
      return rep;
    }
    const double gdd = kernels::dot(dim, F.data(), Gd.data());
    if (!(gdd < 0.0)) {
      rep.failure_reason = "descent_violation";
      finish(std::move(z));
      return rep;
    }

    const double prev_nF = nF;
    double delta;
    std::size_t backtracks = 0;

    if (cfg.variant == Variant::issng_l && k > 0) {
      const LinesearchResult ls =
          nonmonotone_linesearch(inst, z, d, gdd, merit_hist, cfg);
      if (!ls.ok) {
        rep.failure_reason = "linesearch_failure";
        finish(std::move(z));
        return rep;
      }
      delta = ls.delta;
      backtracks = ls.backtracks;
      for (std::size_t i = 0; i < half; ++i) {
        z.y.values[i] += delta * d[i];
        z.p.values[i] += delta * d[half + i];
      }
      F = ls.residual;
      nry = ls.norm_ry;
      nrp = ls.norm_rp;
      nF = std::sqrt(nry * nry + nrp * nrp);
    } else {
      // Fixed-step variant takes delta = 1 throughout; the line-search
      // variant's first step has no reference memory yet and takes delta0.
      delta = (cfg.variant == Variant::issng) ? 1.0 : cfg.delta0;
      for (std::size_t i = 0; i < half; ++i) {
        z.y.values[i] += delta * d[i];
        z.p.values[i] += delta * d[half + i];
      }
      F = residual(inst, z);
      if (!all_finite(F)) {
        rep.failure_reason = "non_finite_state";
        finish(std::move(z));
        return rep;
      }
      nF = split_norm(F, half, &nry, &nrp);
    }

    tau = stopping_ratio(nry, nrp, nry0, nrp0);
    norm_hist.push_back(nF);
    merit_hist.push_back(0.5 * nF * nF);

    IterationRecord rec;
    rec.k = k + 1;
    rec.norm_F = nF;
    rec.norm_ry = nry;
    rec.norm_rp = nrp;
    rec.eta = eta;
    rec.gmres_iters = kry.iterations;
    rec.gmres_relres = lin_norm / prev_nF;
    rec.delta = delta;
    rec.backtracks = backtracks;
    rec.tau = tau;
    rec.merit = 0.5 * nF * nF;
    rep.iterations.push_back(rec);

    if (tau <= cfg.tol) {
      rep.converged = true;
      finish(std::move(z));
      return rep;
    }
  }

  rep.failure_reason = "max_newton";
  finish(std::move(z));
  return rep;
}

}  // namespace issng
