#include "issng/examples.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace issng {

namespace {
constexpr double kPi = std::numbers::pi;

double zfun(double x1, double x2) {
  return std::sin(kPi * x1) * std::sin(kPi * x2);
}
}  // namespace

ExampleCase example1(int n, double alpha, Example1Forcing forcing) {
  ExampleCase ec;
  ec.name = "example1";
  ProblemInstance& inst = ec.instance;
  inst.grid = make_grid(n);
  inst.nl = Nonlinearity{[](double y) { return y * y * y; },
                         [](double y) { return 3.0 * y * y; },
                         [](double y) { return 6.0 * y; },
                         "cubic"};
  inst.bounds = Bounds{};  // unconstrained
  inst.alpha = alpha;

  if (forcing == Example1Forcing::corrected) {
    inst.f = sample(inst.grid, [](double x1, double x2) {
      const double z = zfun(x1, x2);
      return 2.0 * kPi * kPi * z + z * z * z - z * std::exp(kPi * x1);
    });
  } else {
    inst.f = sample(inst.grid, [](double x1, double x2) {
      const double z = zfun(x1, x2);
      return 2.0 * kPi * kPi * z + (kPi * kPi / 1e3) * z -
             z * std::exp(kPi * x1);
    });
  }

  inst.yd = sample(inst.grid, [](double x1, double x2) {
    const double z = zfun(x1, x2);
    const double e = std::exp(kPi * x1);
    return z + (kPi * kPi * z * e) / 1e3 -
           (2.0 * kPi * kPi * std::cos(kPi * x1) * std::sin(kPi * x2) * e) /
               1e3 +
           (3.0 * z * z * z * e) / 1e3;
  });

  // The data fields hard-code 10^3 = 1/alpha; the known exact control is
  // only valid for alpha = 1e-3.
  if (alpha == 1e-3) {
    ec.exact_control = sample(inst.grid, [](double x1, double x2) {
      return zfun(x1, x2) * std::exp(kPi * x1);
    });
  }
  return ec;
}

ExampleCase example2(int n, double alpha) {
  ExampleCase ec;
  ec.name = "example2";
  ProblemInstance& inst = ec.instance;
  inst.grid = make_grid(n);
  inst.nl = Nonlinearity{[](double y) { return y * y * y + y; },
                         [](double y) { return 3.0 * y * y + 1.0; },
                         [](double y) { return 6.0 * y; },
                         "cubic_plus_linear"};
  inst.bounds = Bounds{};  // unconstrained
  inst.alpha = alpha;
  inst.f = sample(inst.grid, [](double, double) { return 0.0; });
  inst.yd = sample(inst.grid, [](double x1, double x2) {
    return std::sin(2.0 * kPi * x1) * std::sin(2.0 * kPi * x2) *
           std::exp(2.0 * x1) / 6.0;
  });
  return ec;
}

ControlError control_error(const GridFunction& u_num,
                           const GridFunction& u_exact) {
  if (!(u_num.grid == u_exact.grid) ||
      u_num.values.size() != u_exact.values.size()) {
    throw std::invalid_argument("control_error: grid mismatch");
  }
  ControlError err;
  double sq = 0.0;
  for (std::size_t i = 0; i < u_num.values.size(); ++i) {
    const double d = u_num.values[i] - u_exact.values[i];
    sq += d * d;
    err.linf = std::max(err.linf, std::abs(d));
  }
  err.l2 = std::sqrt(sq);
  err.l2_weighted = u_num.grid.h * err.l2;
  return err;
}

}  // namespace issng
