#include "plflow/banded.hpp"

#include <cmath>
#include <string>

#include "plflow/error.hpp"

namespace plflow {

void PentadiagonalMatrix::add(std::size_t i, std::size_t j, double v) {
  const long off = static_cast<long>(j) - static_cast<long>(i);
  if (i >= size() || j >= size() || off < -2 || off > 2) {
    throw Error(ErrorKind::InvalidArgument, "entry outside the pentadiagonal band");
  }
  rows_[i][static_cast<std::size_t>(off + 2)] += v;
}

double PentadiagonalMatrix::at(std::size_t i, std::size_t j) const {
  const long off = static_cast<long>(j) - static_cast<long>(i);
  if (off < -2 || off > 2) return 0.0;
  return rows_[i][static_cast<std::size_t>(off + 2)];
}

std::vector<double> PentadiagonalMatrix::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int off = -2; off <= 2; ++off) {
      const long j = static_cast<long>(i) + off;
      if (j < 0 || j >= static_cast<long>(n)) continue;
      y[i] += rows_[i][static_cast<std::size_t>(off + 2)] * x[static_cast<std::size_t>(j)];
    }
  }
  return y;
}

PentadiagonalLU::PentadiagonalLU(const PentadiagonalMatrix& a) : lu_(a.size()) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) lu_[i] = a.band(i);

  double scale = 0.0;
  for (const auto& row : lu_) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  const double tiny = 1e-14 * scale;

  // Doolittle elimination confined to the band: L has unit diagonal and is
  // stored in slots 0..1, U in slots 2..4.
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = lu_[k][2];
    if (!std::isfinite(pivot) || std::abs(pivot) <= tiny) {
      throw Error(ErrorKind::SingularSolve, "vanishing pivot in row " + std::to_string(k));
    }
    for (std::size_t r = 1; r <= 2 && k + r < n; ++r) {
      const std::size_t i = k + r;
      const std::size_t slot = 2 - r;  // column k in row i
      const double m = lu_[i][slot] / pivot;
      lu_[i][slot] = m;
      for (std::size_t c = 1; c <= 2 && k + c < n; ++c) {
        // A(i, k + c) -= m * U(k, k + c)
        lu_[i][slot + c] -= m * lu_[k][2 + c];
      }
    }
  }
}

std::vector<double> PentadiagonalLU::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.size();
  if (rhs.size() != n) throw Error(ErrorKind::InvalidArgument, "right-hand side size mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) x[i] -= lu_[i][1] * x[i - 1];
    if (i >= 2) x[i] -= lu_[i][0] * x[i - 2];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    if (ii + 1 < n) x[ii] -= lu_[ii][3] * x[ii + 1];
    if (ii + 2 < n) x[ii] -= lu_[ii][4] * x[ii + 2];
    x[ii] /= lu_[ii][2];
    if (!std::isfinite(x[ii])) throw Error(ErrorKind::SingularSolve, "non-finite solution");
  }
  return x;
}

}  // namespace plflow
