#include <gtest/gtest.h>

#include "relext/nevanlinna.hpp"
#include "relext/random.hpp"
#include "relext/subspace.hpp"

using namespace relext;
namespace ss = relext::subspace;

namespace {

TauCoefficients scalar(double a, double b, std::vector<std::pair<double, double>> poles = {}) {
  TauCoefficients c;
  c.dim = 1;
  c.mul_basis = Matrix(1, 0);
  c.A = Matrix::Constant(1, 1, a);
  c.B = Matrix::Constant(1, 1, b);
  for (auto [alpha, w] : poles) c.poles.push_back({alpha, Matrix::Constant(1, 1, w)});
  return c;
}

TauCoefficients diag2(double b1, double b2, Matrix A = Matrix::Zero(2, 2)) {
  TauCoefficients c;
  c.dim = 2;
  c.mul_basis = Matrix(2, 0);
  c.A = A;
  c.B = Matrix::Zero(2, 2);
  c.B(0, 0) = b1;
  c.B(1, 1) = b2;
  return c;
}

RationalNevanlinna random_tau(Rng& rng, Index d) {
  TauCoefficients c;
  c.dim = d;
  const Index k = rng.integer(0, d);
  const Matrix U = rng.unitary(d);
  c.mul_basis = U.leftCols(k);
  const Matrix h0 = U.rightCols(d - k);
  const Index d0 = d - k;
  c.A = h0 * rng.hermitian(d0) * h0.adjoint();
  c.B = h0 * rng.psd(d0, rng.integer(0, d0)) * h0.adjoint();
  const Index p = d0 == 0 ? 0 : rng.integer(0, 3);
  for (Index j = 0; j < p; ++j)
    c.poles.push_back({-2.5 + 1.7 * static_cast<double>(j), h0 * rng.psd(d0, rng.integer(1, d0)) * h0.adjoint()});
  return RationalNevanlinna(c);
}

Complex random_nonreal(Rng& rng) {
  return {rng.uniform(-3, 3), rng.uniform(0.2, 3) * (rng.coin() ? 1.0 : -1.0)};
}

}  // namespace

TEST(EvalTau, Examples) {
  const RationalNevanlinna lin(scalar(0, 1));
  EXPECT_LT(relations_equal(eval_tau(lin, 2.0 * kI), LinearRelation::graph(Matrix::Constant(1, 1, 2.0 * kI))).residual,
            1e-14);
  const RationalNevanlinna pole(scalar(0, 0, {{0.0, 1.0}}));
  // (0 - i)^{-1} = i.
  EXPECT_LT(relations_equal(eval_tau(pole, kI), LinearRelation::graph(Matrix::Constant(1, 1, kI))).residual, 1e-14);

  TauCoefficients full;
  full.dim = 2;
  full.mul_basis = Matrix::Identity(2, 2);
  full.A = Matrix::Zero(2, 2);
  full.B = Matrix::Zero(2, 2);
  const RationalNevanlinna vertical(full);
  EXPECT_TRUE(relations_equal(eval_tau(vertical, {0.3, 0.4}), LinearRelation::vertical(2, 2)).holds);
  EXPECT_THROW(RationalNevanlinna(scalar(0, 0, {{0.5, 1.0}})).tau0(0.5), InputError);
}

TEST(ValidateTau, Examples) {
  TauCoefficients bad = scalar(0, 0);
  bad.B(0, 0) = -1e-3;
  const ValidationReport r = validate_tau(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.summary().find("B not PSD"), std::string::npos);

  const ValidationReport z = validate_tau(scalar(0, 0, {{1.0, 0.0}}));
  ASSERT_FALSE(z.ok());
  EXPECT_NE(z.summary().find("pole term vanishes"), std::string::npos);

  EXPECT_TRUE(validate_tau(scalar(0, 1)).ok());
  EXPECT_THROW(RationalNevanlinna{bad}, InputError);
}

TEST(ValidateTau, NamesEveryViolation) {
  TauCoefficients c = scalar(0, 0, {{1.0, -1.0}, {1.0, 2.0}});
  c.A(0, 0) = Complex(0, 1);
  const ValidationReport r = validate_tau(c);
  const std::string s = r.summary();
  EXPECT_NE(s.find("A not Hermitian"), std::string::npos);
  EXPECT_NE(s.find("A_1 not PSD"), std::string::npos);
  EXPECT_NE(s.find("poles not distinct"), std::string::npos);

  TauCoefficients leak = diag2(1, 0);
  leak.mul_basis = Matrix(Vector::Unit(2, 0));
  EXPECT_NE(validate_tau(leak).summary().find("B does not vanish on the multivalued part"), std::string::npos);

  TauCoefficients shape = scalar(0, 1);
  shape.B = Matrix::Zero(2, 2);
  EXPECT_NE(validate_tau(shape).summary().find("shape"), std::string::npos);
}

TEST(DecomposeTau, Examples) {
  const RationalNevanlinna lin(scalar(0, 1));
  const TauDecomposition a = decompose_tau(lin);
  EXPECT_EQ(a.hsecond_frame.cols(), 0);
  EXPECT_EQ(a.tau1.dim(), 1);
  EXPECT_LT(std::abs(a.tau1.tau0({0.2, 0.9})(0, 0) - Complex(0.2, 0.9)), 1e-14);

  const TauDecomposition b = decompose_tau(RationalNevanlinna(diag2(1, 0)));
  EXPECT_LT(ss::distance(b.hsecond_frame, Matrix(Vector::Unit(2, 1))), 1e-14);
  EXPECT_LT(ss::distance(b.hprime_frame, Matrix(Vector::Unit(2, 0))), 1e-14);
  EXPECT_LT(ss::opnorm(b.B1), 1e-14);
  EXPECT_LT(ss::opnorm(b.B2), 1e-14);
  EXPECT_LT(std::abs(b.tau1.tau0({0.2, 0.9})(0, 0) - Complex(0.2, 0.9)), 1e-14);

  Matrix A(2, 2);
  A << 1, Complex(0, 2), Complex(0, -2), 3;
  const TauDecomposition c = decompose_tau(RationalNevanlinna(diag2(0, 0, A)));
  EXPECT_EQ(c.hsecond_frame.cols(), 2);
  EXPECT_EQ(c.tau1.dim(), 0);
}

// tau0 = [[tau1, -B1], [-B1^*, -B2]] on H' (+) H''. With B = diag(1, 0) and
// A = [[a, b], [conj b, c]] this pins B1 = -b and B2 = -c.
TEST(DecomposeTau, SignConventionOfConstantBlocks) {
  Matrix A(2, 2);
  A << 0.5, Complex(0.3, -0.7), Complex(0.3, 0.7), 2.0;
  const TauDecomposition dec = decompose_tau(RationalNevanlinna(diag2(1, 0, A)));
  const Complex p = dec.hprime_frame(0, 0);   // unit phase of the e1 frame
  const Complex q = dec.hsecond_frame(1, 0);  // unit phase of the e2 frame
  EXPECT_LT(std::abs(dec.B1(0, 0) + std::conj(p) * A(0, 1) * q), 1e-14);
  EXPECT_LT(std::abs(dec.B2(0, 0) + A(1, 1)), 1e-14);
  const Complex l{0.1, 0.6};
  EXPECT_LT(relations_equal(reassemble_tau(dec, l), eval_tau(RationalNevanlinna(diag2(1, 0, A)), l)).residual,
            1e-13);
}

TEST(TauLimits, Examples) {
  const TauLimits a = tau_limits(RationalNevanlinna(scalar(0, 1)));
  EXPECT_NEAR(a.B_tau(0, 0).real(), 1.0, 1e-15);
  EXPECT_EQ(a.N_dom_frame.cols(), 0);

  const TauLimits b = tau_limits(RationalNevanlinna(scalar(0, 0, {{0.0, 1.0}})));
  EXPECT_LT(std::abs(b.B_tau(0, 0)), 1e-15);
  EXPECT_EQ(b.N_dom_frame.cols(), 1);
  EXPECT_LT(ss::opnorm(b.N_matrix), 1e-15);

  const TauLimits c = tau_limits(RationalNevanlinna(scalar(0.7, 0)));
  EXPECT_EQ(c.N_dom_frame.cols(), 1);
  EXPECT_NEAR(std::abs(c.N_matrix(0, 0)), 0.7, 1e-15);
  EXPECT_LT(c.numeric_residual, 1e-6);
}

TEST(NumericLimits, SquareRootDiverges) {
  const BlackBoxNevanlinna f(1, [](Complex z) { return Matrix::Constant(1, 1, std::sqrt(z)); });
  const NumericLimits n = numeric_limits(f);
  EXPECT_TRUE(n.confident);
  EXPECT_LT(std::abs(n.B_estimate(0, 0)), 1e-2);
  ASSERT_EQ(n.basis_verdicts.size(), 1u);
  EXPECT_EQ(n.basis_verdicts[0].verdict, Verdict::divergent);
  EXPECT_EQ(n.dom_estimate.cols(), 0);
}

TEST(NumericLimits, IdentityFunction) {
  const BlackBoxNevanlinna f(1, [](Complex z) { return Matrix::Constant(1, 1, z); });
  const NumericLimits n = numeric_limits(f);
  EXPECT_TRUE(n.confident);
  EXPECT_NEAR(n.B_estimate(0, 0).real(), 1.0, 1e-12);
}

TEST(NumericLimits, RationalMatchesAnalyticLimits) {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const RationalNevanlinna tau = random_tau(rng, rng.integer(1, 3));
    const TauLimits lim = tau_limits(tau);  // throws on disagreement > 1e-6
    EXPECT_LT(lim.numeric_residual, 1e-6);
  }
}

TEST(NumericLimits, GridValidationAndUndetermined) {
  const BlackBoxNevanlinna f(1, [](Complex z) { return Matrix::Constant(1, 1, z); });
  EXPECT_THROW(numeric_limits(f, {1.0, 2.0}), InputError);
  EXPECT_THROW(numeric_limits(f, {1.0, 3.0, 2.0}), InputError);
  // y Im log(iy) = y pi / 2 grows by less than a factor two between these
  // points, and its steps never shrink: no verdict is possible.
  const BlackBoxNevanlinna g(1, [](Complex z) { return Matrix::Constant(1, 1, std::log(z)); });
  const NumericLimits n = numeric_limits(g, {10.0, 15.0, 20.0, 25.0});
  EXPECT_FALSE(n.confident);
  EXPECT_EQ(n.basis_verdicts[0].verdict, Verdict::undetermined);
}

TEST(BlackBox, RejectsNonNevanlinnaEvaluators) {
  EXPECT_THROW(BlackBoxNevanlinna(1, [](Complex z) { return Matrix::Constant(1, 1, -z); }), InputError);
  EXPECT_THROW(BlackBoxNevanlinna(1, [](Complex z) { return Matrix::Constant(1, 1, z * z); }), InputError);
  EXPECT_THROW(BlackBoxNevanlinna(2, [](Complex z) { return Matrix::Constant(1, 1, z); }), InputError);
}

TEST(TauProperties, SymmetryPositivityAndReassembly) {
  Rng rng(37);
  for (int k = 0; k < 60; ++k) {
    const RationalNevanlinna tau = random_tau(rng, rng.integer(1, 3));
    const TauDecomposition dec = decompose_tau(tau);
    if (dec.tau1.dim() > 0) {
      const Matrix t1 = dec.tau1.tau0(kI);
      Eigen::SelfAdjointEigenSolver<Matrix> es((t1 - t1.adjoint()) / (2.0 * kI));
      EXPECT_GT(es.eigenvalues().minCoeff(), 1e-10);
    }
    for (int s = 0; s < 5; ++s) {
      const Complex l = random_nonreal(rng);
      EXPECT_LT(relations_equal(eval_tau(tau, std::conj(l)), adjoint(eval_tau(tau, l))).residual, 1e-9);
      const Matrix t0 = tau.tau0(l);
      Eigen::SelfAdjointEigenSolver<Matrix> es((t0 - t0.adjoint()) / (2.0 * kI) * l.imag());
      EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
      EXPECT_LT(relations_equal(reassemble_tau(dec, l), eval_tau(tau, l)).residual, 1e-9);
    }
  }
}

TEST(TauProperties, ImaginaryPartGrowth) {
  Rng rng(41);
  for (int k = 0; k < 30; ++k) {
    const RationalNevanlinna tau = random_tau(rng, 3);
    const TauLimits lim = tau_limits(tau);
    const Matrix& h0 = tau.h0_frame();
    for (Index j = 0; j < lim.N_dom_frame.cols(); ++j) {
      const Vector h = lim.N_dom_frame.col(j);
      double expected = 0.0;
      for (const Pole& p : tau.poles()) expected += h.dot(p.coef * h).real();
      const double y = 1e3;
      const double g = y * h.dot(tau.tau0({0.0, y}) * h).imag();
      EXPECT_NEAR(g, expected, 1e-4 * std::max(1.0, expected));
    }
    // Directions outside ker B grow like y^2 (B h, h).
    const Matrix ran = ss::orth(tau.B(), 1e-9);
    for (Index j = 0; j < ran.cols(); ++j) {
      const Vector h = ran.col(j);
      const double bh = h.dot(tau.B() * h).real();
      const double y = 1e4;
      const double g = y * h.dot(tau.tau0({0.0, y}) * h).imag();
      EXPECT_NEAR(g / (y * y), bh, 1e-6);
    }
    (void)h0;
  }
}
