#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace issng {

// Uniform Cartesian grid on the unit square (0,1)^2 with homogeneous
// Dirichlet boundary. Only interior nodes carry unknowns.
struct Grid {
  int n = 0;     // subintervals per dimension
  double h = 0;  // mesh width, 1/n
  int m = 0;     // interior nodes per dimension, n - 1

  friend bool operator==(const Grid&, const Grid&) = default;

  std::size_t interior_count() const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  }
};

// One scalar field over the interior nodes of a grid, stored
// lexicographically with the x1 index varying fastest.
struct GridFunction {
  Grid grid;
  std::vector<double> values;
};

// Builds a grid with n subintervals per dimension. Throws std::invalid_argument
// for n < 2 (no interior nodes).
Grid make_grid(int n);

// Zero-based linear index of interior node (i, j), both one-based in [1, m].
std::size_t linear_index(const Grid& g, int i, int j);

// Inverse of linear_index: (i, j) of a zero-based linear index.
std::pair<int, int> node_of(const Grid& g, std::size_t idx);

// Evaluates phi at every interior node (i*h, j*h). Throws std::domain_error
// if phi produces a non-finite value.
GridFunction sample(const Grid& g,
                    const std::function<double(double, double)>& phi);

// Matrix-free application of the negative five-point Laplacian with zero
// Dirichlet data: out = (4*v_ij - v_{i-1,j} - v_{i+1,j} - v_{i,j-1} -
// v_{i,j+1}) / h^2, off-grid neighbors treated as zero. No matrix is formed.
GridFunction apply_neg_laplacian(const Grid& g, const GridFunction& v);

// Allocation-free core of apply_neg_laplacian for hot paths. v and out are
// length m*m; out is overwritten.
void neg_laplacian_apply(const Grid& g, const double* v, double* out);

}  // namespace issng
