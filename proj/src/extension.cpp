#include "relext/extension.hpp"

#include <algorithm>

#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

Matrix krein_resolvent(const BoundaryTriplet& t, const RationalNevanlinna& tau, Complex lambda) {
  if (tau.dim() != t.boundary_dim) throw InputError("tau and triplet have different boundary spaces");
  const Matrix r0 = resolvent(a0_of(t), lambda);
  if (t.boundary_dim == 0) return r0;
  const WeylSample w = gamma_and_weyl(t, lambda);
  const WeylSample wbar = gamma_and_weyl(t, std::conj(lambda));
  const LinearRelation middle = add_operator(eval_tau(tau, lambda), w.weyl);
  const auto inv = as_operator(inverse(middle));
  if (!inv) throw SpectrumError("tau(lambda) + M(lambda) is not boundedly invertible");
  return r0 - w.gamma_field * (*inv) * wbar.gamma_field.adjoint();
}

double check_resolvent_identity(const BoundaryTriplet& t, const RationalNevanlinna& tau,
                                Complex lambda) {
  const Matrix krein = krein_resolvent(t, tau, lambda);
  const LinearRelation canonical = extension_of(t, negate(eval_tau(tau, lambda)));
  return ss::opnorm(krein - resolvent(canonical, lambda));
}

namespace {

struct KernelSplit {
  Matrix ker;  // d x a, ker B within H0
  Matrix ran;  // d x b, ran B
};

KernelSplit split_by_B(const RationalNevanlinna& tau) {
  const Matrix& h0 = tau.h0_frame();
  const Index d = tau.dim();
  KernelSplit out{Matrix(d, 0), Matrix(d, 0)};
  if (h0.cols() == 0) return out;
  const Matrix b = h0.adjoint() * tau.B() * h0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  const RealVector& ev = es.eigenvalues();
  const double cut = ss::rank_cutoff(ev.cwiseAbs().maxCoeff(), tau.tol());
  std::vector<Index> ker, ran;
  for (Index i = 0; i < ev.size(); ++i) (ev(i) > cut ? ran : ker).push_back(i);
  out.ker.resize(d, static_cast<Index>(ker.size()));
  out.ran.resize(d, static_cast<Index>(ran.size()));
  for (std::size_t i = 0; i < ker.size(); ++i)
    out.ker.col(static_cast<Index>(i)) = h0 * es.eigenvectors().col(ker[i]);
  for (std::size_t i = 0; i < ran.size(); ++i)
    out.ran.col(static_cast<Index>(i)) = h0 * es.eigenvectors().col(ran[i]);
  return out;
}

}  // namespace

LinearRelation compression_param(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  if (tau.dim() != t.boundary_dim) throw InputError("tau and triplet have different boundary spaces");
  const Index d = tau.dim();
  const KernelSplit split = split_by_B(tau);
  const Matrix& kb = split.ker;
  const Matrix& K = tau.mul_frame();
  const Index a = kb.cols(), b = split.ran.cols(), k = K.cols();
  Matrix span = Matrix::Zero(2 * d, a + b + k);
  span.topLeftCorner(d, a) = kb;
  span.bottomLeftCorner(d, a) = -kb * (kb.adjoint() * tau.A() * kb);
  span.block(d, a, d, b) = split.ran;
  span.bottomRightCorner(d, k) = K;
  return LinearRelation::from_span(span, d, d, tau.tol());
}

LinearRelation compression_param_from_limits(const RationalNevanlinna& tau) {
  const Index d = tau.dim();
  const TauLimits lim = tau_limits(tau);
  const Matrix& dom = lim.N_dom_frame;
  const Matrix b_range = lim.B_tau * tau.h0_frame();
  const Matrix& K = tau.mul_frame();
  const Index a = dom.cols(), b = b_range.cols(), k = K.cols();
  Matrix span = Matrix::Zero(2 * d, a + b + k);
  span.topLeftCorner(d, a) = dom;
  span.bottomLeftCorner(d, a) = -lim.N_matrix;
  span.block(d, a, d, b) = b_range;
  span.bottomRightCorner(d, k) = K;
  return LinearRelation::from_span(span, d, d, tau.tol());
}

LinearRelation tau_infinity(const RationalNevanlinna& tau) {
  const Index d = tau.dim();
  const double tol = tau.tol();
  const Matrix& h0 = tau.h0_frame();
  const Matrix p_ran = tau.B() * ss::pinv(tau.B(), tol);
  const Matrix p_ker = h0 * h0.adjoint() - p_ran;
  const Matrix kc = ss::null_space(tau.B() * h0, tol);
  const Matrix kb = kc.cols() == 0 ? Matrix(d, 0) : Matrix(h0 * kc);
  const Matrix ran = ss::orth(tau.B(), tol);
  const Matrix& K = tau.mul_frame();
  const Index a = kb.cols(), b = ran.cols(), k = K.cols();
  Matrix span = Matrix::Zero(2 * d, a + b + k);
  span.topLeftCorner(d, a) = kb;
  span.bottomLeftCorner(d, a) = p_ker * tau.A() * kb;
  span.block(d, a, d, b) = ran;
  span.bottomRightCorner(d, k) = K;
  return LinearRelation::from_span(span, d, d, tol);
}

LinearRelation compression(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  return extension_of(t, compression_param(t, tau));
}

bool CompressionFlags::consistent() const {
  if (equals_A0 && !subset_A0) return false;
  if (transversal_with_A0 && !self_adjoint) return false;
  return true;
}

CompressionReport assess_compression(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  CompressionReport r;
  r.tau_c = compression_param(t, tau);
  r.C = extension_of(t, r.tau_c);
  r.tau_infinity = tau_infinity(tau);
  r.n_r = tau.model_dim();

  // Geometric route: relation algebra on C.
  const LinearRelation a0 = a0_of(t);
  const LinearRelation& A = t.seed.A;
  const LinearRelation c = r.C;
  r.geometric.subset_A0 = is_subset(c, a0).residual < kFlagTol;
  r.geometric.equals_A0 = relations_equal(c, a0).residual < kFlagTol;
  r.geometric.equals_A = relations_equal(c, A).residual < kFlagTol;
  const LinearRelation cs = adjoint(c);
  r.geometric.self_adjoint = relations_equal(c, cs).residual < kFlagTol;
  const Transversality tr = transversal(t, c, a0);
  r.geometric.transversal_with_A0 = r.geometric.self_adjoint &&
                                    tr.intersection_residual < kFlagTol &&
                                    tr.sum_residual < kFlagTol;

  // Asymptotic route: dom N_{tau0} = {h : lim y Im(tau0(iy)h, h) < inf},
  // B_{tau0} = lim tau0(iy)/(iy).
  const TauLimits lim = tau_limits(tau);
  const Index d = tau.dim();
  const Index d0 = tau.h0_frame().cols();
  const Index k = tau.mul_frame().cols();
  const Index dom_dim = lim.N_dom_frame.cols();
  const Index rank_b = ss::rank(lim.B_tau, tau.tol());
  const bool b_zero = rank_b == 0;
  r.asymptotic.subset_A0 = dom_dim == 0;
  r.asymptotic.equals_A0 = rank_b == d0;
  r.asymptotic.equals_A = k == 0 && b_zero && dom_dim == 0;
  // ker B ⊆ dom N.
  r.asymptotic.self_adjoint = d0 - rank_b <= dom_dim;
  r.asymptotic.transversal_with_A0 = k == 0 && dom_dim == d;
  r.routes_agree = r.geometric == r.asymptotic;

  if (r.asymptotic.transversal_with_A0) {
    // N_tau = lim tau(iy) = A on all of C^d.
    r.N_tau_matrix = tau.A();
    const LinearRelation expected = extension_of(t, LinearRelation::graph(-tau.A(), tau.tol()));
    r.transversal_form_residual = relations_equal(c, expected).residual;
  }
  return r;
}

CompressionReport classify_compression(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  CompressionReport r = assess_compression(t, tau);
  if (!r.routes_agree || !r.geometric.consistent())
    throw InternalError("compression flags: geometric and asymptotic routes disagree");
  return r;
}

}  // namespace relext
