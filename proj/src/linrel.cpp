#include "relext/linrel.hpp"

#include <algorithm>
#include <string>

#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

LinearRelation LinearRelation::from_span(const Matrix& raw_span, Index dim_from, Index dim_to,
                                         double tol) {
  if (dim_from < 0 || dim_to < 0 || raw_span.rows() != dim_from + dim_to)
    throw InputError("relation span has " + std::to_string(raw_span.rows()) +
                     " rows, expected " + std::to_string(dim_from + dim_to));
  if (!ss::all_finite(raw_span)) throw InputError("relation span has non-finite entries");
  if (!(tol >= 0.0)) throw InputError("relation tolerance must be nonnegative");
  return LinearRelation(dim_from, dim_to, ss::orth(raw_span, tol), tol);
}

LinearRelation LinearRelation::graph(const Matrix& op, double tol) {
  const Index p = op.cols();
  const Index q = op.rows();
  Matrix span(p + q, p);
  span << Matrix::Identity(p, p), op;
  return from_span(span, p, q, tol);
}

LinearRelation LinearRelation::zero(Index dim_from, Index dim_to, double tol) {
  return LinearRelation(dim_from, dim_to, Matrix(dim_from + dim_to, 0), tol);
}

LinearRelation LinearRelation::full(Index dim_from, Index dim_to, double tol) {
  const Index n = dim_from + dim_to;
  return LinearRelation(dim_from, dim_to, Matrix::Identity(n, n), tol);
}

LinearRelation LinearRelation::vertical(Index dim_from, Index dim_to, double tol) {
  Matrix frame = Matrix::Zero(dim_from + dim_to, dim_to);
  frame.bottomRows(dim_to).setIdentity();
  return LinearRelation(dim_from, dim_to, std::move(frame), tol);
}

LinearRelation LinearRelation::with_tol(double tol) const {
  return LinearRelation(dim_from_, dim_to_, frame_, tol);
}

LinearRelation make_relation(const Matrix& raw_span, Index dim_from, Index dim_to, double tol) {
  return LinearRelation::from_span(raw_span, dim_from, dim_to, tol);
}

PartsReport parts(const LinearRelation& t) {
  const double tol = t.tol();
  const Matrix left = t.left();
  const Matrix right = t.right();
  PartsReport out;
  out.dom = ss::orth(left, tol);
  out.ran = ss::orth(right, tol);
  out.ker = ss::orth(left * ss::null_space(right, tol), tol);
  out.mul = ss::orth(right * ss::null_space(left, tol), tol);
  if (out.ker.rows() != t.dim_from()) out.ker = Matrix(t.dim_from(), 0);
  if (out.mul.rows() != t.dim_to()) out.mul = Matrix(t.dim_to(), 0);
  return out;
}

LinearRelation inverse(const LinearRelation& t) {
  Matrix swapped(t.ambient(), t.dim());
  swapped << t.right(), t.left();
  return LinearRelation::from_span(swapped, t.dim_to(), t.dim_from(), t.tol());
}

LinearRelation adjoint(const LinearRelation& t) {
  // J T lives in C^q (+) C^p and has an orthonormal frame because J is unitary.
  Matrix jt(t.ambient(), t.dim());
  jt << t.right(), -t.left();
  return LinearRelation::from_span(ss::complement(jt), t.dim_to(), t.dim_from(), t.tol());
}

LinearRelation negate(const LinearRelation& t) {
  Matrix span(t.ambient(), t.dim());
  span << t.left(), -t.right();
  return LinearRelation::from_span(span, t.dim_from(), t.dim_to(), t.tol());
}

LinearRelation shift(const LinearRelation& t, Complex lambda) {
  if (t.dim_from() != t.dim_to()) throw InputError("shift requires a relation in one space");
  Matrix span(t.ambient(), t.dim());
  span << t.left(), t.right() - lambda * t.left();
  return LinearRelation::from_span(span, t.dim_from(), t.dim_to(), t.tol());
}

LinearRelation add_operator(const LinearRelation& t, const Matrix& op) {
  if (op.rows() != t.dim_to() || op.cols() != t.dim_from())
    throw InputError("operator shape does not match relation");
  Matrix span(t.ambient(), t.dim());
  span << t.left(), t.right() + op * t.left();
  return LinearRelation::from_span(span, t.dim_from(), t.dim_to(), t.tol());
}

namespace {

void require_same_shape(const LinearRelation& a, const LinearRelation& b, const char* what) {
  if (a.dim_from() != b.dim_from() || a.dim_to() != b.dim_to())
    throw InputError(std::string(what) + ": relations live in different spaces");
}

}  // namespace

LinearRelation comp_sum(const LinearRelation& t1, const LinearRelation& t2) {
  require_same_shape(t1, t2, "comp_sum");
  const double tol = std::max(t1.tol(), t2.tol());
  return LinearRelation::from_span(ss::sum(t1.frame(), t2.frame(), tol), t1.dim_from(),
                                   t1.dim_to(), tol);
}

LinearRelation intersect(const LinearRelation& t1, const LinearRelation& t2) {
  require_same_shape(t1, t2, "intersect");
  const double tol = std::max(t1.tol(), t2.tol());
  return LinearRelation::from_span(ss::intersect(t1.frame(), t2.frame(), tol), t1.dim_from(),
                                   t1.dim_to(), tol);
}

Comparison relations_equal(const LinearRelation& t1, const LinearRelation& t2) {
  require_same_shape(t1, t2, "relations_equal");
  const double tol = std::max(t1.tol(), t2.tol());
  const double r = ss::distance(t1.frame(), t2.frame());
  return {r < tol, r};
}

Comparison is_subset(const LinearRelation& t1, const LinearRelation& t2) {
  require_same_shape(t1, t2, "is_subset");
  const double tol = std::max(t1.tol(), t2.tol());
  const double r = ss::containment(t1.frame(), t2.frame());
  return {r < tol, r};
}

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::not_symmetric: return "not_symmetric";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::self_adjoint: return "self_adjoint";
  }
  return "?";
}

Symmetry classify_symmetry(const LinearRelation& t) {
  if (t.dim_from() != t.dim_to()) throw InputError("symmetry is defined for relations in one space");
  const LinearRelation ts = adjoint(t);
  if (!is_subset(t, ts).holds) return Symmetry::not_symmetric;
  return relations_equal(t, ts).holds ? Symmetry::self_adjoint : Symmetry::symmetric;
}

Matrix OperatorPartSplit::as_ambient_operator() const {
  const Index n = mul_frame.rows();
  if (op_domain_frame.cols() == 0) return Matrix::Zero(n, n);
  return op_matrix * op_domain_frame.adjoint();
}

OperatorPartSplit operator_part(const LinearRelation& theta) {
  if (theta.dim_from() != theta.dim_to())
    throw InputError("operator_part requires a relation in one space");
  const Index n = theta.dim_from();
  const PartsReport p = parts(theta);
  const double overlap = ss::opnorm(p.mul.adjoint() * p.dom);
  if (overlap > theta.tol() * 10.0)
    throw InputError("dom theta is not orthogonal to mul theta (residual " +
                     std::to_string(overlap) + "); theta is not symmetric");

  OperatorPartSplit out;
  out.mul_frame = p.mul;
  out.op_domain_frame = p.dom;
  const Matrix left = theta.left();
  const Matrix right = theta.right();
  const Matrix coeffs = ss::pinv(left, theta.tol()) * p.dom;
  const Matrix image = right * coeffs;
  const Matrix off_mul = Matrix::Identity(n, n) - ss::projector(p.mul, n);
  out.op_matrix = off_mul * image;
  return out;
}

LinearRelation reassemble(const OperatorPartSplit& split, Index dim, double tol) {
  const Index d = split.op_domain_frame.cols();
  const Index k = split.mul_frame.cols();
  Matrix span = Matrix::Zero(2 * dim, d + k);
  span.topLeftCorner(dim, d) = split.op_domain_frame;
  span.bottomLeftCorner(dim, d) = split.op_matrix;
  span.bottomRightCorner(dim, k) = split.mul_frame;
  return LinearRelation::from_span(span, dim, dim, tol);
}

std::optional<Matrix> as_operator(const LinearRelation& t) {
  const Index p = t.dim_from();
  if (t.dim() != p) return std::nullopt;
  if (p == 0) return Matrix(t.dim_to(), 0);
  const Matrix left = t.left();
  Eigen::JacobiSVD<Matrix> svd(left, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  if (s(p - 1) <= ss::rank_cutoff(s(0), t.tol())) return std::nullopt;
  // right * left^{-1}
  const Matrix left_inv =
      svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
  return Matrix(t.right() * left_inv);
}

Matrix resolvent(const LinearRelation& t, Complex lambda) {
  if (t.dim_from() != t.dim_to()) throw InputError("resolvent requires a relation in one space");
  auto op = as_operator(inverse(shift(t, lambda)));
  if (!op) throw SpectrumError("(T - lambda)^{-1} is not an everywhere defined operator");
  return *op;
}

}  // namespace relext
