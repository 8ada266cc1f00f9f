#pragma once

// Boundary triplets for the adjoint of a symmetric relation A in C^n.
//
// The boundary maps are stored in coordinates of an orthonormal frame of A*
// (a 2n x m matrix), so Gamma0, Gamma1 are d x m matrices and kernels and
// images of boundary maps are plain subspace computations.

#include <vector>

#include "relext/linrel.hpp"
#include "relext/nevanlinna.hpp"
#include "relext/types.hpp"

namespace relext {

struct SymmetricSeed {
  Index space_dim = 0;
  LinearRelation A;
  LinearRelation A_star;
};

// Throws InputError when A is not symmetric.
SymmetricSeed make_seed(const LinearRelation& A);

struct DefectSpace {
  Matrix graph_frame;  // 2n x k, frame of {{f, lambda f}} inside A*
  Matrix frame;        // n x k, frame of ker(A* - lambda)
};

DefectSpace defect(const SymmetricSeed& seed, Complex lambda);

struct DeficiencyIndices {
  Index plus = 0;
  Index minus = 0;
};

DeficiencyIndices deficiency_indices(const SymmetricSeed& seed);

struct BoundaryTriplet {
  SymmetricSeed seed;
  Index boundary_dim = 0;
  Matrix a_star_basis;  // 2n x m orthonormal frame of A*
  Matrix gamma0;        // d x m
  Matrix gamma1;        // d x m

  double tol() const { return seed.A.tol(); }
  Index space_dim() const { return seed.space_dim; }
  // [Gamma0; Gamma1], 2d x m.
  Matrix gamma() const;
  // Boundary values (Gamma0 fhat, Gamma1 fhat) of vectors fhat in A* given as
  // columns in C^{2n}.
  Matrix boundary_values(const Matrix& vectors) const;
};

// Graph-orthogonal decomposition A* = A (+) N_i (+) N_{-i} with fixed
// orthonormal defect frames; with c+/c- the defect coordinates,
//   Gamma0 = (c+ + V c-) / sqrt(2),   Gamma1 = i (c+ - V c-) / sqrt(2).
// Throws InputError on unequal indices or non-unitary V.
BoundaryTriplet von_neumann_triplet(const SymmetricSeed& seed, const Matrix& V);
BoundaryTriplet von_neumann_triplet(const SymmetricSeed& seed);

// Boundary maps given as d x 2n matrices acting on C^{2n}. Throws InputError
// if the result is not a boundary triplet.
BoundaryTriplet explicit_triplet(const SymmetricSeed& seed, const Matrix& gamma0_ambient,
                                 const Matrix& gamma1_ambient);

struct TripletCheck {
  double green_residual = 0.0;
  Index stacked_rank = 0;     // rank of (Gamma0, Gamma1)^T, must be 2d
  double kernel_residual = 0.0;  // distance between ker Gamma and A
  DeficiencyIndices indices;
  Index boundary_dim = 0;
  bool valid(double green_tol) const;
};

TripletCheck validate_triplet(const BoundaryTriplet& t);

// max over basis pairs of |(f',g) - (f,g') - (G1 f, G0 g) + (G0 f, G1 g)|.
double check_green(const BoundaryTriplet& t);

// A_theta = {fhat in A* : {Gamma0 fhat, Gamma1 fhat} in theta}.
LinearRelation extension_of(const BoundaryTriplet& t, const LinearRelation& theta);

// theta = Gamma(Atilde) for A ⊆ Atilde ⊆ A*. Throws InputError otherwise.
LinearRelation boundary_param_of(const BoundaryTriplet& t, const LinearRelation& extension);

// A0 = ker Gamma0.
LinearRelation a0_of(const BoundaryTriplet& t);

// A_theta ∩ A0 = A and A_theta (+) A0 = A*.
struct Transversality {
  bool holds = false;
  double intersection_residual = 0.0;
  double sum_residual = 0.0;
};
Transversality transversal(const BoundaryTriplet& t, const LinearRelation& e1,
                           const LinearRelation& e2);

struct WeylSample {
  Complex lambda;
  Matrix gamma_field;  // n x d
  Matrix weyl;         // d x d
};

// Throws InputError for real lambda, InternalError when Gamma0 restricted to
// the defect space is singular.
WeylSample gamma_and_weyl(const BoundaryTriplet& t, Complex lambda);

struct WeylIdentityResiduals {
  double gamma_identity = 0.0;  // gamma(l) - gamma(z) - (l - z)(A0 - l)^{-1} gamma(z)
  double weyl_identity = 0.0;   // M(z) - M(l)^* - (z - conj l) gamma(l)^* gamma(z)
};

WeylIdentityResiduals check_weyl_identities(const BoundaryTriplet& t, Complex lambda, Complex z);

// F = Gamma({0} (+) mul A*).
LinearRelation forbidden_relation(const BoundaryTriplet& t);

struct ForbiddenAsymptotics {
  double range_inclusion = 0.0;  // ||(I - P_{mul F}) B_M||
  double range_closure = 0.0;    // distance(ran B_M, mul F)
  double representation = 0.0;   // distance(N_M (+) {0} x mul F, F)
  bool confident = false;         // every grid verdict was determined
  NumericLimits limits;
};

ForbiddenAsymptotics check_forbidden_asymptotics(const BoundaryTriplet& t,
                                                 const std::vector<double>& y_grid = default_y_grid());

}  // namespace relext
