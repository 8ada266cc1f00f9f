#include "relext/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace relext::subspace {

double rank_cutoff(double sigma_max, double tol) { return tol * std::max(sigma_max, 1.0); }

namespace {

Index rank_from_singular_values(const RealVector& s, double tol) {
  if (s.size() == 0) return 0;
  const double cut = rank_cutoff(s(0), tol);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

}  // namespace

Matrix orth(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Index r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& m, double tol) {
  const Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - r);
}

Index rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Matrix complement(const Matrix& q) {
  const Index n = q.rows();
  const Index r = q.cols();
  if (r == 0) return Matrix::Identity(n, n);
  if (r >= n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - r);
}

Matrix projector(const Matrix& q, Index ambient) {
  if (q.cols() == 0) return Matrix::Zero(ambient, ambient);
  return q * q.adjoint();
}

Matrix sum(const Matrix& q1, const Matrix& q2, double tol) {
  Matrix both(q1.rows(), q1.cols() + q2.cols());
  both << q1, q2;
  return orth(both, tol);
}

Matrix intersect(const Matrix& q1, const Matrix& q2, double tol) {
  const Matrix c = sum(complement(q1), complement(q2), tol);
  return complement(c);
}

Matrix pinv(const Matrix& m, double tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m);
  cod.setThreshold(rank_cutoff(opnorm(m), tol) / std::max(opnorm(m), 1e-300));
  return cod.pseudoInverse();
}

double opnorm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double distance(const Matrix& q1, const Matrix& q2) {
  const Index n = q1.rows();
  const Matrix diff = projector(q1, n) - projector(q2, n);
  if (n == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double containment(const Matrix& q_inner, const Matrix& q_outer) {
  if (q_inner.cols() == 0) return 0.0;
  if (q_outer.cols() == 0) return opnorm(q_inner);
  return opnorm(q_inner - q_outer * (q_outer.adjoint() * q_inner));
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

}  // namespace relext::subspace
