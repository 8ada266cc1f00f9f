#include "relext/random.hpp"

#include <cmath>
#include <numbers>

namespace relext {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Index Rng::integer(Index lo, Index hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  const Index k = lo + static_cast<Index>(std::floor(uniform() * span));
  return k > hi ? hi : k;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  spare_ = rad * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return rad * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix Rng::gaussian(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::unitary(Index n) {
  if (n == 0) return Matrix(0, 0);
  const Matrix g = gaussian(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Matrix Rng::hermitian(Index n) {
  const Matrix g = gaussian(n, n);
  return (g + g.adjoint()) / 2.0;
}

Matrix Rng::psd(Index n, Index rank) {
  const Matrix u = frame(n, rank);
  RealVector s(rank);
  for (Index i = 0; i < rank; ++i) s(i) = uniform(0.2, 2.0);
  return u * s.asDiagonal() * u.adjoint();
}

Matrix Rng::frame(Index n, Index k) { return unitary(n).leftCols(k); }

}  // namespace relext
