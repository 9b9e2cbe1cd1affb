#include "issng/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "issng/kernels.hpp"

namespace issng {

Grid make_grid(int n) {
  if (n < 2) {
    throw std::invalid_argument("make_grid: n must be at least 2");
  }
  Grid g;
  g.n = n;
  g.h = 1.0 / static_cast<double>(n);
  g.m = n - 1;
  return g;
}

std::size_t linear_index(const Grid& g, int i, int j) {
  return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(g.m) +
         static_cast<std::size_t>(i - 1);
}

std::pair<int, int> node_of(const Grid& g, std::size_t idx) {
  const int i = static_cast<int>(idx % static_cast<std::size_t>(g.m)) + 1;
  const int j = static_cast<int>(idx / static_cast<std::size_t>(g.m)) + 1;
  return {i, j};
}

GridFunction sample(const Grid& g,
                    const std::function<double(double, double)>& phi) {
  GridFunction out{g, std::vector<double>(g.interior_count())};
  for (int j = 1; j <= g.m; ++j) {
    const double x2 = j * g.h;
    for (int i = 1; i <= g.m; ++i) {
      const double v = phi(i * g.h, x2);
      if (!std::isfinite(v)) {
        throw std::domain_error("sample: non-finite value at an interior node");
      }
      out.values[linear_index(g, i, j)] = v;
    }
  }
  return out;
}

void neg_laplacian_apply(const Grid& g, const double* v, double* out) {
  kernels::stencil5(g.m, 1.0 / (g.h * g.h), v, out);
}

GridFunction apply_neg_laplacian(const Grid& g, const GridFunction& v) {
  if (!(v.grid == g) || v.values.size() != g.interior_count()) {
    throw std::invalid_argument("apply_neg_laplacian: grid mismatch");
  }
  GridFunction out{g, std::vector<double>(g.interior_count())};
  neg_laplacian_apply(g, v.values.data(), out.values.data());
  return out;
}

}  // namespace issng
