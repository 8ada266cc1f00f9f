#include "relext/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, ss::opnorm(m)); }

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

double min_eigenvalue(const Matrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_square(const Matrix& m, Index d) { return m.rows() == d && m.cols() == d; }

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i];
  return os.str();
}

ValidationReport validate_tau(const TauCoefficients& c, double tol) {
  ValidationReport r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };
  const Index d = c.dim;
  if (d < 0) {
    fail("negative dimension");
    return r;
  }
  bool shapes_ok = is_square(c.A, d) && is_square(c.B, d) && c.mul_basis.rows() == d;
  for (const auto& p : c.poles) shapes_ok = shapes_ok && is_square(p.coef, d);
  if (!shapes_ok) {
    fail("coefficient shape mismatch");
    return r;
  }
  bool finite = ss::all_finite(c.A) && ss::all_finite(c.B) && ss::all_finite(c.mul_basis);
  for (const auto& p : c.poles) finite = finite && ss::all_finite(p.coef) && std::isfinite(p.alpha);
  if (!finite) {
    fail("non-finite coefficient");
    return r;
  }

  const Matrix K = ss::orth(c.mul_basis, tol);
  if (K.cols() != c.mul_basis.cols()) fail("mul_basis is rank deficient");

  auto check_on_K = [&](const Matrix& x, const std::string& name) {
    if (K.cols() == 0) return;
    const double leak = std::max(ss::opnorm(x * K), ss::opnorm(K.adjoint() * x));
    if (leak > tol * scale_of(x)) fail(name + " does not vanish on the multivalued part");
  };

  if (ss::opnorm(c.A - c.A.adjoint()) > tol * scale_of(c.A)) fail("A not Hermitian");
  check_on_K(c.A, "A");

  if (ss::opnorm(c.B - c.B.adjoint()) > tol * scale_of(c.B))
    fail("B not Hermitian");
  else if (min_eigenvalue(c.B) < -tol * scale_of(c.B))
    fail("B not PSD");
  check_on_K(c.B, "B");

  for (std::size_t j = 0; j < c.poles.size(); ++j) {
    const auto& p = c.poles[j];
    const std::string name = "A_" + std::to_string(j + 1);
    if (ss::opnorm(p.coef) <= tol) {
      fail("pole term vanishes (" + name + " = 0)");
      continue;
    }
    if (ss::opnorm(p.coef - p.coef.adjoint()) > tol * scale_of(p.coef))
      fail(name + " not Hermitian");
    else if (min_eigenvalue(p.coef) < -tol * scale_of(p.coef))
      fail(name + " not PSD");
    check_on_K(p.coef, name);
    for (std::size_t i = 0; i < j; ++i) {
      const double a = c.poles[i].alpha;
      if (std::abs(a - p.alpha) <= tol * std::max(1.0, std::abs(a)))
        fail("poles not distinct (alpha_" + std::to_string(i + 1) + " = alpha_" +
             std::to_string(j + 1) + ")");
    }
  }
  return r;
}

RationalNevanlinna::RationalNevanlinna(const TauCoefficients& c, double tol) : dim_(c.dim), tol_(tol) {
  const ValidationReport report = validate_tau(c, tol);
  if (!report.ok()) throw InputError("invalid Nevanlinna parameter: " + report.summary());
  mul_frame_ = ss::orth(c.mul_basis, tol);
  h0_frame_ = ss::complement(mul_frame_);
  const Matrix p0 = h0_frame_ * h0_frame_.adjoint();
  auto clean = [&p0](const Matrix& x) { return Matrix(p0 * hermitian_part(x) * p0); };
  A_ = clean(c.A);
  B_ = clean(c.B);
  poles_.reserve(c.poles.size());
  for (const auto& p : c.poles) poles_.push_back({p.alpha, clean(p.coef)});
}

Matrix RationalNevanlinna::tau0(Complex lambda) const {
  Matrix t = A_ + lambda * B_;
  for (const auto& p : poles_) {
    const Complex den = p.alpha - lambda;
    if (std::abs(den) <= tol_ * std::max(1.0, std::abs(p.alpha)))
      throw InputError("tau evaluated at a pole");
    t += p.coef / den;
  }
  return t;
}

Matrix RationalNevanlinna::tau0_h0(Complex lambda) const {
  return h0_frame_.adjoint() * tau0(lambda) * h0_frame_;
}

Index RationalNevanlinna::model_dim() const {
  Index n = ss::rank(B_, tol_);
  for (const auto& p : poles_) n += ss::rank(p.coef, tol_);
  return n;
}

LinearRelation eval_tau(const RationalNevanlinna& tau, Complex lambda) {
  const Index d = tau.dim();
  const Matrix& h0 = tau.h0_frame();
  const Matrix& K = tau.mul_frame();
  Matrix span = Matrix::Zero(2 * d, h0.cols() + K.cols());
  span.topLeftCorner(d, h0.cols()) = h0;
  span.bottomLeftCorner(d, h0.cols()) = tau.tau0(lambda) * h0;
  span.bottomRightCorner(d, K.cols()) = K;
  return LinearRelation::from_span(span, d, d, tau.tol());
}

TauDecomposition decompose_tau(const RationalNevanlinna& tau) {
  const Index d = tau.dim();
  const double tol = tau.tol();
  const Matrix& h0 = tau.h0_frame();
  const Index d0 = h0.cols();

  // H'' = ker B ∩ ker A_j, in H0 coordinates.
  const Index blocks = 1 + static_cast<Index>(tau.poles().size());
  Matrix stacked(blocks * d, d0);
  stacked.topRows(d) = tau.B() * h0;
  for (std::size_t j = 0; j < tau.poles().size(); ++j)
    stacked.middleRows((static_cast<Index>(j) + 1) * d, d) = tau.poles()[j].coef * h0;
  const Matrix z = ss::null_space(stacked, tol);
  const Matrix zc = ss::complement(z.cols() == 0 ? Matrix(d0, 0) : z);

  TauDecomposition out;
  out.hsecond_frame = h0 * (z.cols() == 0 ? Matrix(d0, 0) : z);
  out.hprime_frame = h0 * zc;
  out.mul_frame = tau.mul_frame();
  const Matrix& p1 = out.hprime_frame;
  const Matrix& p2 = out.hsecond_frame;
  out.B1 = -(p1.adjoint() * tau.A() * p2);
  out.B2 = -(p2.adjoint() * tau.A() * p2);

  TauCoefficients c1;
  c1.dim = p1.cols();
  c1.mul_basis = Matrix(c1.dim, 0);
  c1.A = p1.adjoint() * tau.A() * p1;
  c1.B = p1.adjoint() * tau.B() * p1;
  // With H' = {0} the pole terms have nothing left to act on.
  if (c1.dim > 0)
    for (const auto& p : tau.poles()) c1.poles.push_back({p.alpha, p1.adjoint() * p.coef * p1});
  out.tau1 = RationalNevanlinna(c1, tol);

  if (c1.dim > 0) {
    const Matrix im1 = (out.tau1.tau0(kI) - out.tau1.tau0(kI).adjoint()) / (2.0 * kI);
    if (min_eigenvalue(im1) <= 0.0)
      throw InternalError("decompose_tau: Im tau1(i) is not positive definite");
  }
  return out;
}

LinearRelation reassemble_tau(const TauDecomposition& dec, Complex lambda, double tol) {
  const Matrix& p1 = dec.hprime_frame;
  const Matrix& p2 = dec.hsecond_frame;
  const Matrix& K = dec.mul_frame;
  const Index d = p1.rows();
  const Index d1 = p1.cols(), d2 = p2.cols(), k = K.cols();
  Matrix span = Matrix::Zero(2 * d, d1 + d2 + k);
  span.topLeftCorner(d, d1) = p1;
  if (d1 > 0) span.block(d, 0, d, d1) = p1 * dec.tau1.tau0(lambda) - p2 * dec.B1.adjoint();
  span.block(0, d1, d, d2) = p2;
  span.block(d, d1, d, d2) = -p1 * dec.B1 - p2 * dec.B2;
  span.bottomRightCorner(d, k) = K;
  return LinearRelation::from_span(span, d, d, tol);
}

const std::vector<double>& default_y_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) g.push_back(std::pow(10.0, 1.0 + 0.5 * k));
    return g;
  }();
  return grid;
}

TauLimits tau_limits(const RationalNevanlinna& tau) {
  const double tol = tau.tol();
  const Matrix& h0 = tau.h0_frame();
  TauLimits out;
  out.B_tau = tau.B();
  const Matrix ker_coords = ss::null_space(h0.adjoint() * tau.B() * h0, tol);
  out.N_dom_frame = ker_coords.cols() == 0 ? Matrix(tau.dim(), 0) : Matrix(h0 * ker_coords);
  out.N_matrix = tau.A() * out.N_dom_frame;

  if (h0.cols() == 0) return out;

  const BlackBoxNevanlinna f(h0.cols(), [&tau](Complex z) { return tau.tau0_h0(z); });
  const NumericLimits est = numeric_limits(f, default_y_grid(), tol);
  const Matrix b_h0 = h0.adjoint() * tau.B() * h0;
  double worst = ss::opnorm(est.B_estimate - b_h0) / std::max(1.0, ss::opnorm(b_h0));
  const Matrix dom_h0 = ker_coords.cols() == 0 ? Matrix(h0.cols(), 0) : ker_coords;
  worst = std::max(worst, ss::distance(est.dom_estimate, dom_h0));
  if (est.dom_estimate.cols() > 0) {
    const Matrix a_h0 = h0.adjoint() * tau.A() * h0;
    const Matrix expected = a_h0 * est.dom_estimate;
    worst = std::max(worst,
                     ss::opnorm(est.N_estimate - expected) / std::max(1.0, ss::opnorm(a_h0)));
  }
  if (!est.confident) worst = std::max(worst, 1.0);
  out.numeric_residual = worst;
  if (worst > 1e-6)
    throw InternalError("tau_limits: analytic and grid limits disagree (residual " +
                        std::to_string(worst) + ")");
  return out;
}

BlackBoxNevanlinna::BlackBoxNevanlinna(Index dim, Evaluator f, bool thread_safe, double tol)
    : dim_(dim), f_(std::move(f)), thread_safe_(thread_safe) {
  if (!f_) throw InputError("black-box Nevanlinna function without evaluator");
  static const Complex probes[] = {{0.0, 1.0}, {1.0, 2.0}, {-3.0, 0.5}, {0.25, 4.0}};
  for (const Complex z : probes) {
    const Matrix up = f_(z);
    const Matrix down = f_(std::conj(z));
    if (up.rows() != dim_ || up.cols() != dim_ || down.rows() != dim_ || down.cols() != dim_)
      throw InputError("black-box evaluator returned a matrix of the wrong shape");
    const double s = std::max(1.0, ss::opnorm(up));
    if (ss::opnorm(down - up.adjoint()) > tol * s)
      throw InputError("black-box function violates f(conj z) = f(z)^*");
    const Matrix im = (up - up.adjoint()) / (2.0 * kI);
    if (dim_ > 0 && min_eigenvalue(im) < -tol * s)
      throw InputError("black-box function has Im f(z) not >= 0 in the upper half-plane");
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::finite: return "finite";
    case Verdict::divergent: return "divergent";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

struct Extrapolated {
  Matrix value;
  bool confident = false;
};

// Limit of a sequence from its last three terms: converged when the last step
// is below 10 * tol plus the roundoff level, otherwise Aitken's delta-squared
// when the steps shrink geometrically along a common direction.
Extrapolated extrapolate(const Matrix& b0, const Matrix& b1, const Matrix& b2, double tol,
                         double noise = 0.0) {
  const Matrix d1 = b1 - b0;
  const Matrix d2 = b2 - b1;
  const double n1 = d1.norm();
  const double n2 = d2.norm();
  const double scale = std::max(1.0, b2.norm());
  if (n2 <= 10.0 * tol * scale + 4.0 * noise) return {b2, true};
  if (n1 == 0.0) return {b2, false};
  const Complex ratio = (d1.adjoint() * d2).trace() / (n1 * n1);
  const double misalign = (d2 - ratio * d1).norm();
  if (std::abs(ratio) < 0.95 && misalign <= 0.05 * n2)
    return {b2 + d2 * (ratio / (1.0 - ratio)), true};
  return {b2, false};
}

// Roundoff in f(iy) is about eps * ||f(iy)||, so y Im(f(iy) h, h) is only
// known to noise[k] = 16 eps y ||f(iy)||. Points whose noise is large against
// both the value and the convergence tolerance are discarded before the
// last three usable values are classified.
DirectionVerdict classify_direction(const std::vector<Matrix>& values, const std::vector<double>& ys,
                                    const std::vector<double>& noise, const Vector& h, double tol) {
  DirectionVerdict v;
  v.direction = h;
  std::vector<double> g, g_noise;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Complex q = h.dot(values[k] * h);  // (f(iy) h, h)
    const double gk = ys[k] * q.imag();
    v.last_value = gk;
    if (noise[k] <= std::max(tol, 1e-6 * std::abs(gk))) {
      g.push_back(gk);
      g_noise.push_back(noise[k]);
    }
  }
  if (g.size() < 3) return v;
  const std::size_t L = g.size() - 1;
  Matrix m0(1, 1), m1(1, 1), m2(1, 1);
  m0(0, 0) = g[L - 2];
  m1(0, 0) = g[L - 1];
  m2(0, 0) = g[L];
  const Extrapolated e = extrapolate(m0, m1, m2, tol, g_noise[L - 1] + g_noise[L]);
  if (e.confident) {
    v.verdict = Verdict::finite;
    v.limit = e.value(0, 0).real();
    return v;
  }
  if (g[L - 2] > 0.0 && g[L - 1] >= 2.0 * g[L - 2] && g[L] >= 2.0 * g[L - 1]) {
    v.verdict = Verdict::divergent;
    return v;
  }
  return v;
}

}  // namespace

NumericLimits numeric_limits(const BlackBoxNevanlinna& f, const std::vector<double>& y_grid,
                             double tol) {
  if (y_grid.size() < 3) throw InputError("numeric_limits needs at least three grid points");
  for (std::size_t k = 0; k < y_grid.size(); ++k)
    if (!(y_grid[k] > 0.0) || (k > 0 && !(y_grid[k] > y_grid[k - 1])))
      throw InputError("y grid must be increasing positive reals");

  const Index d = f.dim();
  std::vector<Matrix> values(y_grid.size());
  std::vector<Matrix> b_seq(y_grid.size());
  std::vector<double> noise(y_grid.size());
  for (std::size_t k = 0; k < y_grid.size(); ++k) {
    const Complex z{0.0, y_grid[k]};
    values[k] = f(z);
    noise[k] = 16.0 * std::numeric_limits<double>::epsilon() * y_grid[k] * ss::opnorm(values[k]);
    // Hermitian part of f(iy)/(iy), i.e. Im f(iy) / y.
    b_seq[k] = hermitian_part(values[k] / z);
  }
  const std::size_t L = y_grid.size() - 1;

  NumericLimits out;
  const double scale = std::max(1.0, b_seq[L].norm());
  if ((b_seq[L] - b_seq[L - 1]).norm() <= 10.0 * tol * scale) {
    // Converged; the error of a rational function decays like 1/y^2 here, so
    // one Richardson step removes it.
    const double q2 = std::pow(y_grid[L] / y_grid[L - 1], 2);
    out.B_estimate = (q2 * b_seq[L] - b_seq[L - 1]) / (q2 - 1.0);
    out.B_confident = true;
  } else {
    const Extrapolated e = extrapolate(b_seq[L - 2], b_seq[L - 1], b_seq[L], tol);
    out.B_estimate = e.value;
    out.B_confident = e.confident;
  }
  out.B_estimate = hermitian_part(out.B_estimate);

  bool all_determined = out.B_confident;
  for (Index i = 0; i < d; ++i) {
    const Vector e = Vector::Unit(d, i);
    out.basis_verdicts.push_back(classify_direction(values, y_grid, noise, e, tol));
    all_determined = all_determined && out.basis_verdicts.back().verdict != Verdict::undetermined;
  }

  Matrix dom(d, 0);
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.B_estimate);
    const Matrix& vecs = es.eigenvectors();
    std::vector<Index> finite_cols;
    for (Index i = 0; i < d; ++i) {
      out.eigen_verdicts.push_back(classify_direction(values, y_grid, noise, vecs.col(i), tol));
      const Verdict v = out.eigen_verdicts.back().verdict;
      all_determined = all_determined && v != Verdict::undetermined;
      if (v == Verdict::finite) finite_cols.push_back(i);
    }
    dom.resize(d, static_cast<Index>(finite_cols.size()));
    for (std::size_t c = 0; c < finite_cols.size(); ++c)
      dom.col(static_cast<Index>(c)) = vecs.col(finite_cols[c]);
  }
  out.dom_estimate = dom;

  // Order-one Richardson on f(iy) h over the last two grid points.
  const double q = y_grid[L] / y_grid[L - 1];
  out.N_estimate = (q * values[L] * dom - values[L - 1] * dom) / (q - 1.0);
  out.confident = all_determined;
  return out;
}

}  // namespace relext
