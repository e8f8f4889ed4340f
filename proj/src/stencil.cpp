#include "plflow/stencil.hpp"

#include <cstddef>

#include "plflow/error.hpp"

namespace plflow {

std::vector<double> fd_weights(double x0, std::span<const double> grid, int order) {
  const std::size_t n = grid.size();
  if (order < 0 || n < static_cast<std::size_t>(order) + 1) {
    throw Error(ErrorKind::InvalidArgument, "stencil too small for derivative order");
  }
  const int m = order;
  // c[j][k]: weight of grid[j] for the k-th derivative.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = grid[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = grid[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = grid[i] - grid[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

ThreePoint first_derivative_3pt(double hm, double hp) {
  const double sum = hm + hp;
  return {-hp / (hm * sum), (hp - hm) / (hm * hp), hm / (hp * sum)};
}

ThreePoint second_derivative_3pt(double hm, double hp) {
  const double sum = hm + hp;
  return {2.0 / (hm * sum), -2.0 / (hm * hp), 2.0 / (hp * sum)};
}

}  // namespace plflow
