#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace plflow {

/// Square matrix with two sub- and two super-diagonals, row-major band storage:
/// band(i)[2 + (j - i)] holds A(i, j) for |i - j| <= 2.
class PentadiagonalMatrix {
 public:
  explicit PentadiagonalMatrix(std::size_t n) : rows_(n, std::array<double, 5>{}) {}

  std::size_t size() const { return rows_.size(); }
  std::array<double, 5>& band(std::size_t i) { return rows_[i]; }
  const std::array<double, 5>& band(std::size_t i) const { return rows_[i]; }

  /// Adds v to A(i, j); throws InvalidArgument outside the band.
  void add(std::size_t i, std::size_t j, double v);
  double at(std::size_t i, std::size_t j) const;

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::vector<std::array<double, 5>> rows_;
};

/// LU factorisation without pivoting. Throws SingularSolve on a vanishing pivot.
class PentadiagonalLU {
 public:
  explicit PentadiagonalLU(const PentadiagonalMatrix& a);

  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<std::array<double, 5>> lu_;
};

}  // namespace plflow
