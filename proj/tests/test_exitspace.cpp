#include <gtest/gtest.h>

#include "relext/exitspace.hpp"
#include "relext/extension.hpp"
#include "relext/instance.hpp"
#include "relext/subspace.hpp"

using namespace relext;
namespace ss = relext::subspace;

namespace {

BoundaryTriplet scalar_triplet() {
  const SymmetricSeed seed = make_seed(LinearRelation::zero(1, 1));
  Matrix g0(1, 2), g1(1, 2);
  g0 << 1.0, 0.0;
  g1 << 0.0, 1.0;
  return explicit_triplet(seed, g0, g1);
}

RationalNevanlinna scalar_tau(double a, double b, std::vector<std::pair<double, double>> poles) {
  TauCoefficients c;
  c.dim = 1;
  c.mul_basis = Matrix(1, 0);
  c.A = Matrix::Constant(1, 1, a);
  c.B = Matrix::Constant(1, 1, b);
  for (auto [alpha, w] : poles) c.poles.push_back({alpha, Matrix::Constant(1, 1, w)});
  return RationalNevanlinna(c);
}

}  // namespace

TEST(ExitSpace, SwapModelIsTheSwapMatrix) {
  const BoundaryTriplet t = scalar_triplet();
  const RationalNevanlinna tau = scalar_tau(0.0, 0.0, {{0.0, 1.0}});
  const ExitSpace es = build_exit_space(t, tau);
  EXPECT_EQ(es.model.dim_Hr, 1);
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_LT(relations_equal(es.model.A_tilde, LinearRelation::graph(swap)).residual, 1e-12);

  const DirectCompression dc = direct_compression(es.model);
  EXPECT_LT(relations_equal(dc.C, LinearRelation::graph(Matrix::Zero(1, 1))).residual, 1e-12);
  EXPECT_EQ(dc.S.dim(), 0);
  EXPECT_EQ(dc.T.dim(), 2);
  EXPECT_TRUE(minimality(es.model, {Complex{0.0, 2.0}}));

  const Complex z{0.0, 2.0};
  EXPECT_LT(std::abs(generalized_resolvent_direct(es.model, z)(0, 0) - Complex{0.0, 0.4}), 1e-12);
  EXPECT_LT(std::abs(krein_resolvent(t, tau, z)(0, 0) - Complex{0.0, 0.4}), 1e-12);
}

TEST(ExitSpace, ScalarModelsReproduceTheirWeylFunctions) {
  const RationalNevanlinna lin = scalar_tau(0.0, 1.0, {});
  const ModelTriplet m1 = realize_model(lin);
  EXPECT_EQ(m1.dim_r, 1);
  EXPECT_EQ(m1.S_r.dim(), 0);
  EXPECT_LT(std::abs(gamma_and_weyl(m1.Pi_r, {0.5, 1.5}).weyl(0, 0) - Complex{0.5, 1.5}), 1e-12);

  const RationalNevanlinna mixed = scalar_tau(0.3, 1.0, {{1.0, 2.0}});
  const ModelTriplet m2 = realize_model(mixed);
  EXPECT_EQ(m2.dim_r, 2);
  EXPECT_LT(m2.weyl_residual, 1e-10);
}

TEST(ExitSpace, ReductionWithDegenerateDirection) {
  // A = {0} in C^2 has boundary space C^2 with (f, f').
  const SymmetricSeed seed = make_seed(LinearRelation::zero(2, 2));
  Matrix g0 = Matrix::Zero(2, 4), g1 = Matrix::Zero(2, 4);
  g0.leftCols(2).setIdentity();
  g1.rightCols(2).setIdentity();
  const BoundaryTriplet t = explicit_triplet(seed, g0, g1);
  TauCoefficients c;
  c.dim = 2;
  c.mul_basis = Matrix(2, 0);
  c.A = Matrix::Zero(2, 2);
  c.B = Matrix::Zero(2, 2);
  c.B(0, 0) = 1.0;
  const RationalNevanlinna tau(c);
  const ReducedProblem r = reduce(t, tau);
  EXPECT_EQ(r.PiPrime.boundary_dim, 1);
  EXPECT_EQ(r.S.dim(), 1);  // {{(0, h), (0, 0)}}
  const ExitSpace es = build_exit_space(t, tau);
  const DirectCompression dc = direct_compression(es.model);
  EXPECT_LT(relations_equal(dc.S, r.S).residual, 1e-10);
  EXPECT_LT(relations_equal(dc.C, compression(t, tau)).residual, 1e-10);
  EXPECT_LT(relations_equal(dc.C, compression_via_forbidden(es)).residual, 1e-10);
  EXPECT_LT(chain_residual(t.seed, dc), 1e-10);
}

TEST(ExitSpace, FullMultivaluedPartReducesToA0) {
  const BoundaryTriplet t = scalar_triplet();
  TauCoefficients c;
  c.dim = 1;
  c.mul_basis = Matrix::Identity(1, 1);
  c.A = Matrix::Zero(1, 1);
  c.B = Matrix::Zero(1, 1);
  const ReducedProblem r = reduce(t, RationalNevanlinna(c));
  EXPECT_EQ(r.PiPrime.boundary_dim, 0);
  EXPECT_TRUE(relations_equal(r.S, a0_of(t)).holds);
}

TEST(ExitSpace, UncoupledModelIsNotMinimal) {
  // H (+) H_r with diag(0, 1): the H_r part is unreachable from H.
  ExitSpaceModel m;
  m.dim_H = 1;
  m.dim_Hr = 1;
  Matrix a(2, 2);
  a << 0, 0, 0, 1;
  m.A_tilde = LinearRelation::graph(a);
  EXPECT_FALSE(minimality(m));
  const Complex z{0.2, 1.0};
  EXPECT_LT(std::abs(generalized_resolvent_direct(m, z)(0, 0) + 1.0 / z), 1e-14);
}

TEST(ExitSpace, RandomModelsCompressToTheKreinParameter) {
  GenBounds b;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Materialized m = materialize(generate_instance(b, 500 + s, static_cast<Profile>(s % kProfileCount)));
    const ExitSpace es = build_exit_space(m.triplet, m.tau);
    const Complex z{0.4, 1.3};
    EXPECT_LT(ss::opnorm(generalized_resolvent_direct(es.model, z) - krein_resolvent(m.triplet, m.tau, z)), 1e-8)
        << "seed " << s;
    const DirectCompression dc = direct_compression(es.model);
    EXPECT_LT(chain_residual(m.triplet.seed, dc), 1e-7);
    EXPECT_TRUE(relations_equal(dc.C, compression(m.triplet, m.tau)).holds) << "seed " << s;
    EXPECT_TRUE(relations_equal(compression_via_forbidden(es), dc.C).holds) << "seed " << s;
  }
}
