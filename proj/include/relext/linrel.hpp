#pragma once

// Linear relations between finite-dimensional complex Hilbert spaces.
//
// A relation T from C^p to C^q is a subspace of C^p (+) C^q. It is stored as
// an orthonormal frame of shape (p + q) x r: the first p rows of a column are
// the "left" vector f, the last q rows the "right" vector f', so each column
// encodes a pair {f, f'}. Equality of relations is equality of the orthogonal
// projectors onto the two subspaces, never equality of frames.

#include <optional>

#include "relext/types.hpp"

namespace relext {

class LinearRelation {
 public:
  LinearRelation() = default;

  // Orthonormalized, rank-truncated span of the columns of raw_span, which
  // has dim_from + dim_to rows. Throws InputError on non-finite entries.
  static LinearRelation from_span(const Matrix& raw_span, Index dim_from, Index dim_to,
                                  double tol = kDefaultTol);

  // gr(op) = {{f, op f}} for op of shape dim_to x dim_from.
  static LinearRelation graph(const Matrix& op, double tol = kDefaultTol);
  static LinearRelation zero(Index dim_from, Index dim_to, double tol = kDefaultTol);
  static LinearRelation full(Index dim_from, Index dim_to, double tol = kDefaultTol);
  // {0} (+) C^dim_to, the purely multivalued relation.
  static LinearRelation vertical(Index dim_from, Index dim_to, double tol = kDefaultTol);

  Index dim_from() const { return dim_from_; }
  Index dim_to() const { return dim_to_; }
  Index ambient() const { return dim_from_ + dim_to_; }
  Index dim() const { return frame_.cols(); }
  double tol() const { return tol_; }

  const Matrix& frame() const { return frame_; }
  auto left() const { return frame_.topRows(dim_from_); }
  auto right() const { return frame_.bottomRows(dim_to_); }

  LinearRelation with_tol(double tol) const;

 private:
  LinearRelation(Index dim_from, Index dim_to, Matrix frame, double tol)
      : dim_from_(dim_from), dim_to_(dim_to), frame_(std::move(frame)), tol_(tol) {}

  Index dim_from_ = 0;
  Index dim_to_ = 0;
  Matrix frame_ = Matrix(0, 0);
  double tol_ = kDefaultTol;
};

LinearRelation make_relation(const Matrix& raw_span, Index dim_from, Index dim_to,
                             double tol = kDefaultTol);

struct PartsReport {
  Matrix dom;
  Matrix ran;
  Matrix ker;
  Matrix mul;
};

PartsReport parts(const LinearRelation& t);

// T^{-1} = {{f', f}}.
LinearRelation inverse(const LinearRelation& t);

// T* = (J T)^perp with J{f, f'} = {f', -f}; a relation from C^q to C^p.
LinearRelation adjoint(const LinearRelation& t);

// -T = {{f, -f'}}.
LinearRelation negate(const LinearRelation& t);

// T - lambda = {{f, f' - lambda f}}.
LinearRelation shift(const LinearRelation& t, Complex lambda);

// T + op = {{f, f' + op f}} for an everywhere defined operator op.
LinearRelation add_operator(const LinearRelation& t, const Matrix& op);

// Componentwise sum T1 (+) T2 and intersection. Throw InputError on
// mismatched ambient dimensions.
LinearRelation comp_sum(const LinearRelation& t1, const LinearRelation& t2);
LinearRelation intersect(const LinearRelation& t1, const LinearRelation& t2);

struct Comparison {
  bool holds = false;
  double residual = 0.0;
};

// ||P_{T1} - P_{T2}|| < tol.
Comparison relations_equal(const LinearRelation& t1, const LinearRelation& t2);
// ||(I - P_{T2}) P_{T1}|| < tol, i.e. T1 is contained in T2.
Comparison is_subset(const LinearRelation& t1, const LinearRelation& t2);

enum class Symmetry { not_symmetric, symmetric, self_adjoint };

const char* to_string(Symmetry s);

Symmetry classify_symmetry(const LinearRelation& t);

// theta = B (+) ({0} (+) mul theta) for symmetric theta.
struct OperatorPartSplit {
  Matrix mul_frame;        // orthonormal frame of mul theta
  Matrix op_domain_frame;  // orthonormal frame of dom theta, inside (mul theta)^perp
  // Columns are B h_k for the columns h_k of op_domain_frame, with values in
  // (mul theta)^perp.
  Matrix op_matrix;

  // B P_dom as an operator on the whole space.
  Matrix as_ambient_operator() const;
};

// Throws InputError when dom theta is not orthogonal to mul theta within tol.
OperatorPartSplit operator_part(const LinearRelation& theta);

LinearRelation reassemble(const OperatorPartSplit& split, Index dim, double tol = kDefaultTol);

// Matrix of T when T is the graph of an everywhere defined operator;
// std::nullopt otherwise.
std::optional<Matrix> as_operator(const LinearRelation& t);

// Matrix of (T - lambda)^{-1}. Throws SpectrumError when that relation is not
// an everywhere defined operator.
Matrix resolvent(const LinearRelation& t, Complex lambda);

}  // namespace relext
