#include "relext/exitspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

ReducedProblem reduce(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  if (tau.dim() != t.boundary_dim) throw InputError("tau and triplet have different boundary spaces");
  const Index d = tau.dim();
  const double tol = t.tol();
  ReducedProblem r;
  r.decomposition = decompose_tau(tau);
  const TauDecomposition& dec = r.decomposition;
  const Matrix& p1 = dec.hprime_frame;
  const Matrix& p2 = dec.hsecond_frame;
  const Matrix& K = dec.mul_frame;
  const Index d1 = p1.cols(), d2 = p2.cols(), k = K.cols();

  Matrix span = Matrix::Zero(2 * d, d2 + k);
  span.topLeftCorner(d, d2) = p2;
  if (d2 > 0) span.bottomLeftCorner(d, d2) = p1 * dec.B1 + p2 * dec.B2;
  span.bottomRightCorner(d, k) = K;
  r.theta0 = LinearRelation::from_span(span, d, d, tol);
  r.S = extension_of(t, r.theta0);

  BoundaryTriplet& pp = r.PiPrime;
  pp.seed = make_seed(r.S);
  pp.boundary_dim = d1;
  pp.a_star_basis = pp.seed.A_star.frame();
  const Matrix g = t.boundary_values(pp.a_star_basis);
  const Matrix g0 = g.topRows(d);
  const Matrix g1 = g.bottomRows(d);
  pp.gamma0 = p1.adjoint() * g0;
  pp.gamma1 = p1.adjoint() * g1;
  if (d2 > 0) pp.gamma1 -= dec.B1 * (p2.adjoint() * g0);

  const TripletCheck check = validate_triplet(pp);
  r.green_residual = check.green_residual;
  const double scale = std::max(1.0, ss::opnorm(pp.gamma()));
  if (!check.valid(1e-8 * scale * scale))
    throw InternalError("reduced maps are not a boundary triplet for S* (Green residual " +
                        fmt(check.green_residual) + ")");
  return r;
}

const std::array<Complex, 5>& model_check_points() {
  static const std::array<Complex, 5> pts{Complex{0.3, 1.1}, Complex{-1.7, 0.6},
                                          Complex{2.2, -0.9}, Complex{-0.4, -2.5},
                                          Complex{1.3, 3.7}};
  return pts;
}

namespace {

// F with F^* F = m for m >= 0, rows = numerical rank of m.
Matrix psd_factor(const Matrix& m, double tol) {
  if (m.rows() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const RealVector& ev = es.eigenvalues();
  const double top = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  const double cut = ss::rank_cutoff(top, tol);
  std::vector<Index> keep;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) keep.push_back(i);
  Matrix f(static_cast<Index>(keep.size()), m.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    f.row(static_cast<Index>(i)) =
        std::sqrt(ev(keep[i])) * es.eigenvectors().col(keep[i]).adjoint();
  return f;
}

}  // namespace

ModelTriplet realize_model(const RationalNevanlinna& tau1) {
  const Index d = tau1.dim();
  const double tol = tau1.tol();
  if (tau1.mul_frame().cols() != 0)
    throw InputError("model realization needs a parameter without multivalued part");

  std::vector<Matrix> factors{psd_factor(tau1.B(), tol)};
  for (const Pole& p : tau1.poles()) factors.push_back(psd_factor(p.coef, tol));
  Index r = 0;
  for (const Matrix& f : factors) r += f.rows();

  Matrix G(r, d);
  // Base maps on S0* = C^{2r}, vectors (f, f').
  Matrix base0 = Matrix::Zero(r, 2 * r);
  Matrix base1 = Matrix::Zero(r, 2 * r);
  Index off = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const Index rj = factors[j].rows();
    G.middleRows(off, rj) = factors[j];
    for (Index i = off; i < off + rj; ++i) {
      if (j == 0) {
        base0(i, i) = 1.0;
        base1(i, r + i) = 1.0;
      } else {
        const double alpha = tau1.poles()[j - 1].alpha;
        base0(i, r + i) = 1.0;
        base0(i, i) = -alpha;
        base1(i, i) = -1.0;
      }
    }
    off += rj;
  }
  if (ss::rank(G, tol) != d)
    throw InputError("parameter is not uniformly strict: Im tau1(i) is singular");

  ModelTriplet m;
  m.dim_r = r;
  const Matrix stacked = [&] {
    Matrix s(r + d, 2 * r);
    s.topRows(r) = base0;
    s.bottomRows(d) = G.adjoint() * base1;
    return s;
  }();
  const Matrix sr = ss::null_space(stacked, tol);
  m.S_r = LinearRelation::from_span(sr.cols() == 0 ? Matrix(2 * r, 0) : sr, r, r, tol);

  BoundaryTriplet& pr = m.Pi_r;
  pr.seed = make_seed(m.S_r);
  pr.boundary_dim = d;
  pr.a_star_basis = pr.seed.A_star.frame();
  // S_r* = {fhat : Gamma0^0 fhat in ran G}.
  const Matrix g_orth = ss::orth(G, tol);
  const Matrix expected = ss::null_space(ss::complement(g_orth).adjoint() * base0, tol);
  if (ss::distance(expected, pr.a_star_basis) > 1e-7)
    throw InternalError("model adjoint does not match the range condition");
  const Matrix g_pinv = ss::pinv(G, tol);
  pr.gamma0 = g_pinv * base0 * pr.a_star_basis;
  pr.gamma1 = G.adjoint() * base1 * pr.a_star_basis + tau1.A() * pr.gamma0;

  const TripletCheck check = validate_triplet(pr);
  const double scale = std::max(1.0, ss::opnorm(pr.gamma()));
  if (!check.valid(1e-8 * scale * scale))
    throw InternalError("model maps are not a boundary triplet (Green residual " +
                        fmt(check.green_residual) + ")");

  for (const Complex z : model_check_points()) {
    const Matrix t1 = tau1.tau0(z);
    const double res = ss::opnorm(gamma_and_weyl(pr, z).weyl - t1);
    m.weyl_residual = std::max(m.weyl_residual, res / std::max(1.0, ss::opnorm(t1)));
  }
  if (m.weyl_residual > 1e-8)
    throw InternalError("model Weyl function misses tau1 by " + fmt(m.weyl_residual));
  return m;
}

ExitSpaceModel couple(const BoundaryTriplet& pi_prime, const BoundaryTriplet& pi_r) {
  const Index d = pi_prime.boundary_dim;
  if (pi_r.boundary_dim != d) throw InputError("coupled triplets need the same boundary space");
  const Index n = pi_prime.space_dim();
  const Index r = pi_r.space_dim();
  const Index m1 = pi_prime.a_star_basis.cols();
  const Index m2 = pi_r.a_star_basis.cols();
  const double tol = std::max(pi_prime.tol(), pi_r.tol());

  Matrix cond(2 * d, m1 + m2);
  cond << pi_prime.gamma0, -pi_r.gamma0, pi_prime.gamma1, pi_r.gamma1;
  const Matrix c = ss::null_space(cond, tol);

  const Index N = n + r;
  Matrix span = Matrix::Zero(2 * N, c.cols());
  if (c.cols() > 0) {
    const Matrix f = pi_prime.a_star_basis * c.topRows(m1);
    const Matrix fr = pi_r.a_star_basis * c.bottomRows(m2);
    span.middleRows(0, n) = f.topRows(n);
    span.middleRows(n, r) = fr.topRows(r);
    span.middleRows(N, n) = f.bottomRows(n);
    span.middleRows(N + n, r) = fr.bottomRows(r);
  }
  ExitSpaceModel m;
  m.dim_H = n;
  m.dim_Hr = r;
  m.A_tilde = LinearRelation::from_span(span, N, N, tol);
  const Comparison sa = relations_equal(m.A_tilde, adjoint(m.A_tilde));
  if (sa.residual > 1e-7)
    throw InternalError("coupled relation is not self-adjoint (residual " + fmt(sa.residual) + ")");
  return m;
}

namespace {

// Rows of the (f, f_r | f', f'_r) layout.
Matrix rows_H(const Matrix& frame, Index n, Index N) {
  Matrix out(2 * n, frame.cols());
  out.topRows(n) = frame.middleRows(0, n);
  out.bottomRows(n) = frame.middleRows(N, n);
  return out;
}

}  // namespace

DirectCompression direct_compression(const ExitSpaceModel& model) {
  const Index n = model.dim_H, r = model.dim_Hr, N = n + r;
  const Matrix& a = model.A_tilde.frame();
  const double tol = model.A_tilde.tol();
  DirectCompression out;

  const Matrix left_r = a.middleRows(n, r);
  const Matrix c1 = ss::null_space(left_r, tol);
  out.C = LinearRelation::from_span(rows_H(a * c1, n, N), n, n, tol);

  Matrix both_r(2 * r, a.cols());
  both_r << a.middleRows(n, r), a.middleRows(N + n, r);
  const Matrix c2 = ss::null_space(both_r, tol);
  out.S = LinearRelation::from_span(rows_H(a * c2, n, N), n, n, tol);

  out.T = LinearRelation::from_span(rows_H(a, n, N), n, n, tol);
  return out;
}

double chain_residual(const SymmetricSeed& seed, const DirectCompression& dc) {
  return std::max({is_subset(seed.A, dc.S).residual, is_subset(dc.S, dc.C).residual,
                   is_subset(dc.C, dc.T).residual, is_subset(dc.T, seed.A_star).residual});
}

Matrix generalized_resolvent_direct(const ExitSpaceModel& model, Complex lambda) {
  const Index n = model.dim_H;
  return resolvent(model.A_tilde, lambda).topLeftCorner(n, n);
}

bool minimality(const ExitSpaceModel& model, const std::vector<Complex>& lambdas) {
  const Index n = model.dim_H, N = n + model.dim_Hr;
  Matrix stacked(N, n * static_cast<Index>(1 + lambdas.size()));
  stacked.leftCols(n) = Matrix::Identity(N, n);
  Index col = n;
  for (const Complex z : lambdas) {
    stacked.middleCols(col, n) = resolvent(model.A_tilde, z).leftCols(n);
    col += n;
  }
  return ss::rank(stacked, 1e-8) == N;
}

bool minimality(const ExitSpaceModel& model) {
  std::vector<Complex> lambdas;
  const Index count = std::max<Index>(model.dim_Hr, 1) + 1;
  for (Index k = 0; k < count; ++k)
    lambdas.emplace_back(-1.3 + 0.61 * static_cast<double>(k),
                         (k % 2 == 0 ? 1.0 : -1.0) * (0.7 + 0.23 * static_cast<double>(k)));
  return minimality(model, lambdas);
}

ExitSpace build_exit_space(const BoundaryTriplet& t, const RationalNevanlinna& tau) {
  ExitSpace es;
  es.reduced = reduce(t, tau);
  es.model_triplet = realize_model(es.reduced.decomposition.tau1);
  es.model = couple(es.reduced.PiPrime, es.model_triplet.Pi_r);
  return es;
}

LinearRelation compression_via_forbidden(const ExitSpace& es) {
  return extension_of(es.reduced.PiPrime, negate(forbidden_relation(es.model_triplet.Pi_r)));
}

}  // namespace relext
