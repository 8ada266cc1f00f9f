#pragma once

// Orthonormal-frame subspace utilities. A subspace of C^N is represented by
// an N x r matrix with orthonormal columns; r = 0 is a legal value.

#include "relext/types.hpp"

namespace relext::subspace {

// Singular values below tol * max(sigma_max, 1) count as zero.
double rank_cutoff(double sigma_max, double tol);

// Orthonormal basis of the column span of m.
Matrix orth(const Matrix& m, double tol);

// Orthonormal basis of {x : m x = 0}.
Matrix null_space(const Matrix& m, double tol);

// Numerical rank of m.
Index rank(const Matrix& m, double tol);

// Orthonormal basis of the orthogonal complement of span(q) in C^{q.rows()}.
// q must have orthonormal columns.
Matrix complement(const Matrix& q);

Matrix projector(const Matrix& q, Index ambient);

Matrix sum(const Matrix& q1, const Matrix& q2, double tol);
Matrix intersect(const Matrix& q1, const Matrix& q2, double tol);

// Moore-Penrose pseudo-inverse with the rank cutoff above.
Matrix pinv(const Matrix& m, double tol);

// Largest singular value.
double opnorm(const Matrix& m);

// ||P1 - P2|| for the orthogonal projectors onto span(q1), span(q2).
double distance(const Matrix& q1, const Matrix& q2);

// ||(I - P_outer) q_inner||; zero iff span(q_inner) lies in span(q_outer).
double containment(const Matrix& q_inner, const Matrix& q_outer);

bool all_finite(const Matrix& m);

}  // namespace relext::subspace
