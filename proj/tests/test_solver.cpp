#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "issng/examples.hpp"
#include "issng/krylov.hpp"
#include "issng/solver.hpp"
#include "test_support.hpp"

namespace {

issng::State constant_state(const issng::Grid& g, double c) {
  const std::size_t count = g.interior_count();
  return issng::State{issng::GridFunction{g, std::vector<double>(count, c)},
                      issng::GridFunction{g, std::vector<double>(count, c)}};
}

// 1-D model problem used as a closed-form line-search oracle: one interior
// node (n = 2), no nonlinearity, alpha = 1, f = yd = 0. The residual is
// linear, F(z) = A z with A = [[16, -1], [1, 16]], so along the ray
// z0 + t * (-z0) with F(z0) = (1, 0) the merit is exactly Q(t) =
// 0.5 (1 - t)^2 and the directional derivative at t = 0 is -1.
issng::ProblemInstance tiny_linear_instance() {
  issng::ProblemInstance inst;
  inst.grid = issng::make_grid(2);
  inst.nl = issng::Nonlinearity{[](double) { return 0.0; },
                                [](double) { return 0.0; },
                                [](double) { return 0.0; }, "zero"};
  inst.alpha = 1.0;
  inst.f = issng::GridFunction{inst.grid, {0.0}};
  inst.yd = issng::GridFunction{inst.grid, {0.0}};
  return inst;
}

issng::State tiny_oracle_start() {
  // z0 = A^{-1} (1, 0) = (16/257, -1/257).
  issng::ProblemInstance inst = tiny_linear_instance();
  return issng::State{issng::GridFunction{inst.grid, {16.0 / 257.0}},
                      issng::GridFunction{inst.grid, {-1.0 / 257.0}}};
}

bool records_identical(const std::vector<issng::IterationRecord>& a,
                       const std::vector<issng::IterationRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].k != b[i].k || a[i].norm_F != b[i].norm_F ||
        a[i].norm_ry != b[i].norm_ry || a[i].norm_rp != b[i].norm_rp ||
        a[i].eta != b[i].eta || a[i].gmres_iters != b[i].gmres_iters ||
        a[i].gmres_relres != b[i].gmres_relres || a[i].delta != b[i].delta ||
        a[i].backtracks != b[i].backtracks || a[i].tau != b[i].tau ||
        a[i].merit != b[i].merit) {
      return false;
    }
  }
  return true;
}

// Schedule calibrated for fast (2-4 iteration) fully resolved runs on the
// first benchmark: a tight first forcing term and strongly decreasing
// later ones.
issng::SolverConfig fast_schedule(issng::Variant v) {
  issng::SolverConfig cfg;
  cfg.eta0 = 1e-4;
  cfg.gamma = 0.01;
  cfg.a1 = 2.0;
  cfg.variant = v;
  return cfg;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("forcing term: first iteration returns eta0") {
    issng::SolverConfig cfg;
    cfg.eta0 = 0.37;
    CHECK(issng::forcing_term(0, {123.0}, cfg) == 0.37);
  }

  TEST_CASE("forcing term: k = 1 uses the initial norm as denominator") {
    issng::SolverConfig cfg;  // gamma = 0.9, a1 = 2, eta_max = 0.9
    const double got = issng::forcing_term(1, {10.0, 5.0}, cfg);
    CHECK(testsupport::rel_err(got, 0.9 * 0.25) <= 1e-15);
  }

  TEST_CASE("forcing term: k >= 2 maxes over norms 1..k-1, excluding norm 0") {
    issng::SolverConfig cfg;
    const double a = issng::forcing_term(2, {10.0, 5.0, 4.0}, cfg);
    CHECK(testsupport::rel_err(a, 0.9 * 0.64) <= 1e-15);
    // A huge initial norm must not enter the denominator.
    const double b = issng::forcing_term(2, {1e6, 5.0, 4.0}, cfg);
    CHECK(b == a);
    // Three-entry history: denominator is max(5, 4) = 5.
    const double c = issng::forcing_term(3, {10.0, 5.0, 4.0, 3.9}, cfg);
    CHECK(testsupport::rel_err(c, 0.9 * (3.9 / 5.0) * (3.9 / 5.0)) <= 1e-15);
  }

  TEST_CASE("forcing term: clamps to [eta_floor, eta_max]") {
    issng::SolverConfig cfg;
    // Growing norm would give 0.9 * 1.44 = 1.296 -> clamped to eta_max.
    CHECK(issng::forcing_term(2, {10.0, 5.0, 6.0}, cfg) == cfg.eta_max);
    // Tiny ratio underflows the floor.
    CHECK(issng::forcing_term(2, {10.0, 5.0, 1e-9}, cfg) == cfg.eta_floor);
    // Zero denominator degrades to the floor instead of dividing by zero.
    CHECK(issng::forcing_term(1, {0.0, 1.0}, cfg) == cfg.eta_floor);
  }

  TEST_CASE("forcing term: input validation") {
    issng::SolverConfig cfg;
    CHECK_THROWS_AS(issng::forcing_term(0, {}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(issng::forcing_term(2, {1.0, 2.0}, cfg),
                    std::invalid_argument);
  }

  TEST_CASE("stopping ratio") {
    CHECK(issng::stopping_ratio(1.0, 2.0, 100.0, 200.0) == 0.01);
    // Denominator is clamped below by 1.
    CHECK(issng::stopping_ratio(0.3, 0.2, 0.4, 0.3) == 0.5);
    CHECK(issng::stopping_ratio(0.0, 0.0, 5.0, 5.0) == 0.0);
  }

  TEST_CASE("line search accepts the full step at c1 = 0.5 (exact oracle)") {
    const issng::ProblemInstance inst = tiny_linear_instance();
    const issng::State z0 = tiny_oracle_start();
    const std::vector<double> d = {-z0.y.values[0], -z0.p.values[0]};
    issng::SolverConfig cfg;
    cfg.c1 = 0.5;
    const issng::LinesearchResult ls =
        issng::nonmonotone_linesearch(inst, z0, d, -1.0, {0.5}, cfg);
    CHECK(ls.ok);
    CHECK(ls.delta == 1.0);
    CHECK(ls.backtracks == 0);
    CHECK(ls.accepted_merit == 0.0);  // trial lands exactly on the root
    CHECK(ls.norm_ry == 0.0);
    CHECK(ls.norm_rp == 0.0);
    REQUIRE(ls.residual.size() == 2);
    CHECK(ls.residual[0] == 0.0);
    CHECK(ls.residual[1] == 0.0);
  }

  TEST_CASE("line search backtracks three times at c1 = 0.9 (exact oracle)") {
    // Q(t) = 0.5 (1-t)^2 vs 0.5 - 0.9 t: rejected at t = 1, 0.5, 0.25 and
    // accepted at t = 0.125 (0.3828125 <= 0.3875).
    const issng::ProblemInstance inst = tiny_linear_instance();
    const issng::State z0 = tiny_oracle_start();
    const std::vector<double> d = {-z0.y.values[0], -z0.p.values[0]};
    issng::SolverConfig cfg;
    cfg.c1 = 0.9;
    const issng::LinesearchResult ls =
        issng::nonmonotone_linesearch(inst, z0, d, -1.0, {0.5}, cfg);
    CHECK(ls.ok);
    CHECK(ls.delta == 0.125);
    CHECK(ls.backtracks == 3);
    CHECK(testsupport::rel_err(ls.accepted_merit, 0.5 * 0.875 * 0.875) <=
          1e-12);
  }

  TEST_CASE("line search reference merit honors the window") {
    const issng::ProblemInstance inst = tiny_linear_instance();
    const issng::State z0 = tiny_oracle_start();
    const std::vector<double> d = {-z0.y.values[0], -z0.p.values[0]};
    const std::vector<double> hist = {0.1, 0.5, 0.05};
    issng::SolverConfig cfg;
    cfg.c1 = 0.5;
    cfg.max_backtracks = 10;

    cfg.window = 0;  // unbounded: M = 0.5, full step accepted
    auto ls = issng::nonmonotone_linesearch(inst, z0, d, -1.0, hist, cfg);
    CHECK(ls.ok);
    CHECK(ls.delta == 1.0);

    cfg.window = 2;  // M = max(0.5, 0.05) = 0.5, same acceptance
    ls = issng::nonmonotone_linesearch(inst, z0, d, -1.0, hist, cfg);
    CHECK(ls.ok);
    CHECK(ls.delta == 1.0);

    cfg.window = 1;  // M = 0.05 < Q(z0): unattainable along this ray
    ls = issng::nonmonotone_linesearch(inst, z0, d, -1.0, hist, cfg);
    CHECK_FALSE(ls.ok);
  }

  TEST_CASE("line search rejects an empty merit history") {
    const issng::ProblemInstance inst = tiny_linear_instance();
    const issng::State z0 = tiny_oracle_start();
    const std::vector<double> d = {1.0, 0.0};
    issng::SolverConfig cfg;
    CHECK_THROWS_AS(issng::nonmonotone_linesearch(inst, z0, d, -1.0, {}, cfg),
                    std::invalid_argument);
  }

  TEST_CASE("solve: a start satisfying the stopping test costs nothing") {
    issng::ProblemInstance inst = tiny_linear_instance();
    const issng::State z0 = constant_state(inst.grid, 0.0);
    const issng::SolveReport rep = issng::solve(inst, z0, {});
    CHECK(rep.converged);
    CHECK(rep.iterations.empty());
    CHECK(rep.failure_reason.empty());
    CHECK(rep.peak_krylov_bytes == 0);
    CHECK(rep.final_control.values[0] == 0.0);
  }

  TEST_CASE("solve: benchmark 1, n = 32, defaults (fixed-step variant)") {
    const issng::ExampleCase ec = issng::example1(32);
    issng::SolverConfig cfg;
    cfg.variant = issng::Variant::issng;
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    CHECK(rep.converged);
    CHECK(rep.failure_reason.empty());
    CHECK(rep.iterations.size() >= 3);
    CHECK(rep.iterations.size() <= 5);
    const issng::IterationRecord& last = rep.iterations.back();
    CHECK(last.norm_ry < 1e-8);
    CHECK(last.norm_rp < 1e-8);
    CHECK(last.tau <= 1e-8);
  }

  TEST_CASE("solve: benchmark 1, n = 32, fast schedule hits 3 iterations") {
    const issng::ExampleCase ec = issng::example1(32);
    const issng::State z0 = constant_state(ec.instance.grid, 0.0);
    const issng::SolveReport lrep =
        issng::solve(ec.instance, z0, fast_schedule(issng::Variant::issng_l));
    const issng::SolveReport prep =
        issng::solve(ec.instance, z0, fast_schedule(issng::Variant::issng));
    for (const issng::SolveReport* rep : {&lrep, &prep}) {
      CHECK(rep->converged);
      CHECK(rep->iterations.size() >= 2);
      CHECK(rep->iterations.size() <= 4);
      const issng::IterationRecord& last = rep->iterations.back();
      CHECK(last.norm_ry < 1e-8);
      CHECK(last.norm_ry > 1e-13);
      CHECK(last.norm_rp < 1e-8);
      // Near-exact directions take full steps, so the searched variant
      // walks the same trajectory as the fixed-step one.
      CHECK(rep->iterations.back().delta == 1.0);
    }
    for (const issng::IterationRecord& rec : lrep.iterations)
      CHECK(rec.backtracks == 0);
    CHECK(records_identical(lrep.iterations, prep.iterations));
    // First record carries eta0; the step that produced z_1 used it.
    CHECK(lrep.iterations.front().eta == 1e-4);
  }

  TEST_CASE("solve: record bookkeeping invariants") {
    const issng::ExampleCase ec = issng::example1(8);
    issng::SolverConfig cfg;
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    REQUIRE(rep.converged);
    REQUIRE(!rep.iterations.empty());
    CHECK(rep.iterations.front().eta == 0.5);
    for (std::size_t i = 0; i < rep.iterations.size(); ++i) {
      const issng::IterationRecord& r = rep.iterations[i];
      CHECK(r.k == i + 1);
      CHECK(testsupport::rel_err(r.merit, 0.5 * r.norm_F * r.norm_F) <=
            1e-14);
      CHECK(testsupport::rel_err(
                r.norm_F, std::hypot(r.norm_ry, r.norm_rp)) <= 1e-14);
      CHECK(r.eta >= cfg.eta_floor);
      CHECK(r.eta <= cfg.eta_max);
      // The verified linear-model residual honored the forcing term.
      CHECK(r.gmres_relres <= r.eta * (1.0 + 1e-10));
      CHECK(r.delta > 0.0);
    }
    CHECK(rep.iterations.back().tau <= cfg.tol);
    // Krylov basis accounting: dim = 2 * 49 caps the restart length.
    CHECK(rep.peak_krylov_bytes == (98 + 1) * 98 * sizeof(double));
  }

  TEST_CASE("solve: benchmark 2, n = 64, zero start, library defaults") {
    const issng::ExampleCase ec = issng::example2(64);
    issng::SolverConfig cfg;  // issng_l, window unbounded
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    CHECK(rep.converged);
    CHECK(rep.iterations.size() >= 4);
    CHECK(rep.iterations.size() <= 6);
    double prev_merit = std::numeric_limits<double>::infinity();
    for (const issng::IterationRecord& r : rep.iterations) {
      CHECK(r.delta == 1.0);      // every full step is accepted
      CHECK(r.backtracks == 0);
      CHECK(r.merit < prev_merit);  // monotone in spite of the wide window
      prev_merit = r.merit;
    }
    CHECK(rep.iterations.back().norm_ry < 1e-10);
    CHECK(rep.iterations.back().norm_rp < 1e-11);
  }

  TEST_CASE("solve: benchmark 2, n = 128, ones start, both variants agree") {
    const issng::ExampleCase ec = issng::example2(128);
    const issng::State z0 = constant_state(ec.instance.grid, 1.0);
    issng::SolverConfig cfg;
    cfg.variant = issng::Variant::issng_l;
    const issng::SolveReport lrep = issng::solve(ec.instance, z0, cfg);
    cfg.variant = issng::Variant::issng;
    const issng::SolveReport prep = issng::solve(ec.instance, z0, cfg);
    CHECK(lrep.converged);
    CHECK(prep.converged);
    CHECK(lrep.iterations.size() >= 7);
    CHECK(lrep.iterations.size() <= 9);
    // No trial step is ever rejected on this path, so the searched variant
    // reproduces the fixed-step trajectory bit for bit.
    CHECK(records_identical(lrep.iterations, prep.iterations));
    for (const issng::IterationRecord& r : lrep.iterations)
      CHECK(r.backtracks == 0);
    // The stopping test is relative to a large initial residual here, so
    // the absolute final norms sit well above the ones of zero-start runs.
    CHECK(lrep.iterations.back().tau <= 1e-8);
    CHECK(lrep.iterations.back().norm_ry < 1e-6);
    CHECK(lrep.iterations.back().norm_ry > 1e-13);
  }

  TEST_CASE("solve: reruns are bit-identical") {
    const issng::ExampleCase ec = issng::example1(32);
    const issng::State z0 = constant_state(ec.instance.grid, 0.0);
    const auto a = issng::solve(ec.instance, z0,
                                fast_schedule(issng::Variant::issng_l));
    const auto b = issng::solve(ec.instance, z0,
                                fast_schedule(issng::Variant::issng_l));
    CHECK(a.converged);
    CHECK(records_identical(a.iterations, b.iterations));
    CHECK(testsupport::max_abs_diff(a.final_control.values,
                                    b.final_control.values) == 0.0);
  }

  TEST_CASE("solve failure taxonomy: outer iteration cap") {
    const issng::ExampleCase ec = issng::example1(8);
    issng::SolverConfig cfg;
    cfg.max_newton = 1;
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.failure_reason == "max_newton");
    CHECK(rep.iterations.size() == 1);
  }

  TEST_CASE("solve failure taxonomy: inner solver starved of iterations") {
    const issng::ExampleCase ec = issng::example1(8);
    issng::SolverConfig cfg;
    cfg.eta0 = 1e-12;
    cfg.gmres_max_iters = 1;
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.failure_reason == "gmres_nonconvergence");
    CHECK(rep.iterations.empty());
  }

  TEST_CASE("solve failure taxonomy: non-finite start") {
    const issng::ExampleCase ec = issng::example1(8);
    issng::State z0 = constant_state(ec.instance.grid, 0.0);
    z0.y.values[0] = std::numeric_limits<double>::quiet_NaN();
    const issng::SolveReport rep = issng::solve(ec.instance, z0, {});
    CHECK_FALSE(rep.converged);
    CHECK(rep.failure_reason == "non_finite_state");
    CHECK(rep.iterations.empty());
  }

  TEST_CASE("solve failure taxonomy: unattainable sufficient decrease") {
    // window = 1 makes the reference merit the current one; with c1 > 1 the
    // Armijo slope then demands more decrease than a Newton ray can give.
    const issng::ExampleCase ec = issng::example1(8);
    issng::SolverConfig cfg;
    cfg.window = 1;
    cfg.c1 = 5.0;
    cfg.max_backtracks = 30;
    const issng::SolveReport rep =
        issng::solve(ec.instance, constant_state(ec.instance.grid, 0.0), cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.failure_reason == "linesearch_failure");
    CHECK(rep.iterations.size() == 1);  // the unsearched first step went in
  }
}
