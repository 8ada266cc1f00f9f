#include "relext/triplet.hpp"

#include <algorithm>
#include <cmath>

#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

SymmetricSeed make_seed(const LinearRelation& A) {
  if (A.dim_from() != A.dim_to()) throw InputError("seed relation must act in one space");
  SymmetricSeed s;
  s.space_dim = A.dim_from();
  s.A = A;
  s.A_star = adjoint(A);
  const Comparison sym = is_subset(A, s.A_star);
  if (!sym.holds)
    throw InputError("seed relation is not symmetric (residual " + std::to_string(sym.residual) + ")");
  return s;
}

namespace {

// Coordinates c with {f, lambda f} = frame * c.
Matrix defect_coords(const Matrix& frame, Index n, Complex lambda, double tol) {
  const Matrix f = frame.topRows(n);
  const Matrix fp = frame.bottomRows(n);
  return ss::null_space(fp - lambda * f, tol);
}

}  // namespace

DefectSpace defect(const SymmetricSeed& seed, Complex lambda) {
  const Index n = seed.space_dim;
  const Matrix& q = seed.A_star.frame();
  const Matrix c = defect_coords(q, n, lambda, seed.A.tol());
  DefectSpace out;
  out.graph_frame = c.cols() == 0 ? Matrix(2 * n, 0) : Matrix(q * c);
  out.frame = ss::orth(out.graph_frame.topRows(n), seed.A.tol());
  return out;
}

DeficiencyIndices deficiency_indices(const SymmetricSeed& seed) {
  return {defect(seed, kI).graph_frame.cols(), defect(seed, -kI).graph_frame.cols()};
}

Matrix BoundaryTriplet::gamma() const {
  Matrix g(2 * boundary_dim, gamma0.cols());
  g << gamma0, gamma1;
  return g;
}

Matrix BoundaryTriplet::boundary_values(const Matrix& vectors) const {
  return gamma() * (a_star_basis.adjoint() * vectors);
}

BoundaryTriplet von_neumann_triplet(const SymmetricSeed& seed, const Matrix& V) {
  const Index n = seed.space_dim;
  const DefectSpace plus = defect(seed, kI);
  const DefectSpace minus = defect(seed, -kI);
  const Index d = plus.graph_frame.cols();
  if (minus.graph_frame.cols() != d)
    throw InputError("unequal deficiency indices (" + std::to_string(d) + ", " +
                     std::to_string(minus.graph_frame.cols()) + ")");
  if (V.rows() != d || V.cols() != d)
    throw InputError("V must be " + std::to_string(d) + " x " + std::to_string(d));
  if (!ss::all_finite(V) || ss::opnorm(V.adjoint() * V - Matrix::Identity(d, d)) > 1e-8)
    throw InputError("V is not unitary");

  const Index a = seed.A.dim();
  BoundaryTriplet t;
  t.seed = seed;
  t.boundary_dim = d;
  t.a_star_basis.resize(2 * n, a + 2 * d);
  t.a_star_basis << seed.A.frame(), plus.graph_frame, minus.graph_frame;
  const double s = 1.0 / std::sqrt(2.0);
  t.gamma0 = Matrix::Zero(d, a + 2 * d);
  t.gamma1 = Matrix::Zero(d, a + 2 * d);
  t.gamma0.middleCols(a, d) = s * Matrix::Identity(d, d);
  t.gamma0.rightCols(d) = s * V;
  t.gamma1.middleCols(a, d) = (kI * s) * Matrix::Identity(d, d);
  t.gamma1.rightCols(d) = (-kI * s) * V;
  return t;
}

BoundaryTriplet von_neumann_triplet(const SymmetricSeed& seed) {
  const Index d = defect(seed, kI).graph_frame.cols();
  return von_neumann_triplet(seed, Matrix::Identity(d, d));
}

bool TripletCheck::valid(double green_tol) const {
  return green_residual < green_tol && indices.plus == indices.minus &&
         boundary_dim == indices.plus && stacked_rank == 2 * boundary_dim &&
         kernel_residual < 1e-7;
}

TripletCheck validate_triplet(const BoundaryTriplet& t) {
  TripletCheck c;
  c.green_residual = check_green(t);
  c.indices = deficiency_indices(t.seed);
  const Matrix g = t.gamma();
  c.stacked_rank = ss::rank(g, t.tol());
  const Matrix ker = t.a_star_basis * ss::null_space(g, t.tol());
  c.kernel_residual = ss::distance(ss::orth(ker, t.tol()), t.seed.A.frame());
  c.boundary_dim = t.boundary_dim;
  return c;
}

BoundaryTriplet explicit_triplet(const SymmetricSeed& seed, const Matrix& gamma0_ambient,
                                 const Matrix& gamma1_ambient) {
  const Index n = seed.space_dim;
  const Index d = gamma0_ambient.rows();
  if (gamma0_ambient.cols() != 2 * n || gamma1_ambient.cols() != 2 * n ||
      gamma1_ambient.rows() != d)
    throw InputError("explicit boundary maps must both be d x 2n");
  if (!ss::all_finite(gamma0_ambient) || !ss::all_finite(gamma1_ambient))
    throw InputError("explicit boundary maps have non-finite entries");
  BoundaryTriplet t;
  t.seed = seed;
  t.boundary_dim = d;
  t.a_star_basis = seed.A_star.frame();
  t.gamma0 = gamma0_ambient * t.a_star_basis;
  t.gamma1 = gamma1_ambient * t.a_star_basis;
  const TripletCheck c = validate_triplet(t);
  const double scale = std::max(1.0, ss::opnorm(t.gamma()));
  if (!c.valid(1e-8 * scale * scale))
    throw InputError("explicit maps do not form a boundary triplet (Green residual " +
                     std::to_string(c.green_residual) + ", rank " +
                     std::to_string(c.stacked_rank) + ", kernel residual " +
                     std::to_string(c.kernel_residual) + ")");
  return t;
}

double check_green(const BoundaryTriplet& t) {
  const Index n = t.space_dim();
  const Matrix f = t.a_star_basis.topRows(n);
  const Matrix fp = t.a_star_basis.bottomRows(n);
  const Matrix lhs = f.adjoint() * fp - fp.adjoint() * f;
  const Matrix rhs = t.gamma0.adjoint() * t.gamma1 - t.gamma1.adjoint() * t.gamma0;
  const Matrix diff = lhs - rhs;
  return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
}

LinearRelation extension_of(const BoundaryTriplet& t, const LinearRelation& theta) {
  const Index d = t.boundary_dim;
  if (theta.dim_from() != d || theta.dim_to() != d)
    throw InputError("boundary parameter must be a relation in C^" + std::to_string(d));
  const Index n = t.space_dim();
  const double tol = std::max(t.tol(), theta.tol());
  const Matrix theta_perp = ss::complement(theta.frame());
  const Matrix constraint = theta_perp.adjoint() * t.gamma();
  const Matrix c = ss::null_space(constraint, tol);
  const Matrix span = c.cols() == 0 ? Matrix(2 * n, 0) : Matrix(t.a_star_basis * c);
  return LinearRelation::from_span(span, n, n, t.tol());
}

LinearRelation boundary_param_of(const BoundaryTriplet& t, const LinearRelation& extension) {
  const Index n = t.space_dim();
  if (extension.dim_from() != n || extension.dim_to() != n)
    throw InputError("extension lives in the wrong space");
  const Comparison lower = is_subset(t.seed.A, extension);
  const Comparison upper = is_subset(extension, t.seed.A_star);
  if (!lower.holds || !upper.holds)
    throw InputError("relation is not a proper extension (A ⊆ T ⊆ A* fails)");
  const Index d = t.boundary_dim;
  return LinearRelation::from_span(t.boundary_values(extension.frame()), d, d, t.tol());
}

LinearRelation a0_of(const BoundaryTriplet& t) {
  const Index d = t.boundary_dim;
  return extension_of(t, LinearRelation::vertical(d, d, t.tol()));
}

Transversality transversal(const BoundaryTriplet& t, const LinearRelation& e1,
                           const LinearRelation& e2) {
  Transversality out;
  out.intersection_residual = relations_equal(intersect(e1, e2), t.seed.A).residual;
  out.sum_residual = relations_equal(comp_sum(e1, e2), t.seed.A_star).residual;
  const double tol = t.tol();
  out.holds = out.intersection_residual < tol && out.sum_residual < tol;
  return out;
}

WeylSample gamma_and_weyl(const BoundaryTriplet& t, Complex lambda) {
  if (lambda.imag() == 0.0) throw InputError("Weyl function sampled on the real axis");
  const Index n = t.space_dim();
  const Index d = t.boundary_dim;
  WeylSample w;
  w.lambda = lambda;
  if (d == 0) {
    w.gamma_field = Matrix(n, 0);
    w.weyl = Matrix(0, 0);
    return w;
  }
  const Matrix c = defect_coords(t.a_star_basis, n, lambda, t.tol());
  if (c.cols() != d)
    throw InternalError("defect space has dimension " + std::to_string(c.cols()) + ", expected " +
                        std::to_string(d));
  const Matrix g0 = t.gamma0 * c;
  Eigen::JacobiSVD<Matrix> svd(g0);
  const RealVector& s = svd.singularValues();
  if (s(d - 1) <= ss::rank_cutoff(s(0), t.tol()))
    throw InternalError("Gamma0 restricted to the defect space is singular");
  const Matrix inv = g0.partialPivLu().inverse();
  w.gamma_field = t.a_star_basis.topRows(n) * c * inv;
  w.weyl = t.gamma1 * c * inv;
  return w;
}

WeylIdentityResiduals check_weyl_identities(const BoundaryTriplet& t, Complex lambda, Complex z) {
  const WeylSample wl = gamma_and_weyl(t, lambda);
  const WeylSample wz = gamma_and_weyl(t, z);
  const Matrix r0 = resolvent(a0_of(t), lambda);
  WeylIdentityResiduals r;
  r.gamma_identity =
      ss::opnorm(wl.gamma_field - wz.gamma_field - (lambda - z) * r0 * wz.gamma_field);
  r.weyl_identity = ss::opnorm(wz.weyl - wl.weyl.adjoint() -
                               (z - std::conj(lambda)) * wl.gamma_field.adjoint() * wz.gamma_field);
  return r;
}

LinearRelation forbidden_relation(const BoundaryTriplet& t) {
  const Index n = t.space_dim();
  const Index d = t.boundary_dim;
  const Matrix mul = parts(t.seed.A_star).mul;
  Matrix vectors = Matrix::Zero(2 * n, mul.cols());
  vectors.bottomRows(n) = mul;
  return LinearRelation::from_span(t.boundary_values(vectors), d, d, t.tol());
}

ForbiddenAsymptotics check_forbidden_asymptotics(const BoundaryTriplet& t,
                                                 const std::vector<double>& y_grid) {
  ForbiddenAsymptotics out;
  const Index d = t.boundary_dim;
  if (d == 0) {
    out.confident = true;
    return out;
  }
  const BlackBoxNevanlinna m(d, [&t](Complex z) { return gamma_and_weyl(t, z).weyl; });
  out.limits = numeric_limits(m, y_grid, t.tol());
  out.confident = out.limits.confident;

  const LinearRelation F = forbidden_relation(t);
  const Matrix mul_f = parts(F).mul;
  const Matrix& b = out.limits.B_estimate;
  out.range_inclusion = ss::opnorm(b - ss::projector(mul_f, d) * b);
  out.range_closure = ss::distance(ss::orth(b, 1e-7), mul_f);

  const Matrix& dom = out.limits.dom_estimate;
  Matrix span = Matrix::Zero(2 * d, dom.cols() + mul_f.cols());
  span.topLeftCorner(d, dom.cols()) = dom;
  span.bottomLeftCorner(d, dom.cols()) = out.limits.N_estimate;
  span.bottomRightCorner(d, mul_f.cols()) = mul_f;
  const LinearRelation estimate = LinearRelation::from_span(span, d, d, 1e-7);
  out.representation = ss::distance(estimate.frame(), F.frame());
  return out;
}

}  // namespace relext
