#pragma once

#include <span>
#include <vector>

namespace plflow {

/// Finite-difference weights for the derivative of order `order` at `x0`
/// from values on `grid` (Fornberg's recurrence, arbitrary spacing).
std::vector<double> fd_weights(double x0, std::span<const double> grid, int order);

/// Three-point first derivative weights for spacings hm = x0 - x_{-1}, hp = x_{+1} - x0.
/// The outer weights are exact negatives of each other when hm == hp.
struct ThreePoint {
  double minus;
  double centre;
  double plus;
};

ThreePoint first_derivative_3pt(double hm, double hp);
ThreePoint second_derivative_3pt(double hm, double hp);

}  // namespace plflow
