#pragma once

// Explicit finite-dimensional exit spaces for rational parameters.
//
// tau is split as tau0 = [[tau1, -B1], [-B1^*, -B2]] (+) K; the constant
// part defines the intermediate extension S = A_{theta0}, tau1 is realized
// as the Weyl function of a model triplet on a small space H_r, and the two
// triplets are glued into a self-adjoint relation on H (+) H_r.

#include <array>
#include <vector>

#include "relext/linrel.hpp"
#include "relext/nevanlinna.hpp"
#include "relext/triplet.hpp"

namespace relext {

struct ReducedProblem {
  TauDecomposition decomposition;
  LinearRelation theta0;  // {{h'', B1 h'' + B2 h''}} (+) ({0} x K)
  LinearRelation S;       // A_{theta0}
  BoundaryTriplet PiPrime;  // triplet for S* on H'
  double green_residual = 0.0;
};

// Throws InternalError when the reduced maps fail the triplet checks.
ReducedProblem reduce(const BoundaryTriplet& t, const RationalNevanlinna& tau);

struct ModelTriplet {
  Index dim_r = 0;
  LinearRelation S_r;
  BoundaryTriplet Pi_r;
  double weyl_residual = 0.0;  // worst |M_r - tau1| over model_check_points()
};

const std::array<Complex, 5>& model_check_points();

// tau1 must have trivial multivalued part and Im tau1(i) > 0 (InputError
// otherwise). Throws InternalError when the Weyl function misses tau1 by more
// than 1e-8 * scale.
ModelTriplet realize_model(const RationalNevanlinna& tau1);

struct ExitSpaceModel {
  Index dim_H = 0;
  Index dim_Hr = 0;
  // Frame in C^{2(n + r)} with coordinates (f, f_r | f', f'_r).
  LinearRelation A_tilde;
};

// Atilde = {fhat (+) fhat_r : G0' fhat = G0^r fhat_r, G1' fhat = -G1^r fhat_r}.
// Throws InternalError when the result is not self-adjoint.
ExitSpaceModel couple(const BoundaryTriplet& pi_prime, const BoundaryTriplet& pi_r);

struct DirectCompression {
  LinearRelation C;  // {{f, P_H f'} : {f (+) 0, f' (+) f'_r} in Atilde}
  LinearRelation S;  // Atilde ∩ H^2
  LinearRelation T;  // P_H Atilde on both components
};

DirectCompression direct_compression(const ExitSpaceModel& model);

// Worst containment residual along A ⊆ S ⊆ C ⊆ T ⊆ A*.
double chain_residual(const SymmetricSeed& seed, const DirectCompression& dc);

// H-block of (Atilde - lambda)^{-1}.
Matrix generalized_resolvent_direct(const ExitSpaceModel& model, Complex lambda);

// rank [E_H, (Atilde - l)^{-1} E_H for l in lambdas] == n + r.
bool minimality(const ExitSpaceModel& model, const std::vector<Complex>& lambdas);
bool minimality(const ExitSpaceModel& model);

struct ExitSpace {
  ReducedProblem reduced;
  ModelTriplet model_triplet;
  ExitSpaceModel model;
};

ExitSpace build_exit_space(const BoundaryTriplet& t, const RationalNevanlinna& tau);

// C = S_{-F_r} in the reduced triplet, F_r the forbidden relation of Pi_r.
LinearRelation compression_via_forbidden(const ExitSpace& es);

}  // namespace relext
