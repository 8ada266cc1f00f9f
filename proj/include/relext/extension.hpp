#pragma once

// Krein's formula for generalized resolvents and the compression C(Ã_tau)
// of the exit-space extension Ã_tau attached to a rational parameter tau.

#include <optional>

#include "relext/linrel.hpp"
#include "relext/nevanlinna.hpp"
#include "relext/triplet.hpp"

namespace relext {

// (A0 - l)^{-1} - gamma(l) (tau(l) + M(l))^{-1} gamma(conj l)^*.
// The middle inverse is a relation inverse; SpectrumError when it is not an
// everywhere defined operator at this lambda.
Matrix krein_resolvent(const BoundaryTriplet& t, const RationalNevanlinna& tau, Complex lambda);

// ||krein_resolvent - (A_{-tau(l)} - l)^{-1}||.
double check_resolvent_identity(const BoundaryTriplet& t, const RationalNevanlinna& tau,
                                Complex lambda);

// tau_c = {{h, -A'h + h' + k} : h in ker B, h' in ran B, k in K} with
// A' = P_{ker B} A restricted to ker B.
LinearRelation compression_param(const BoundaryTriplet& t, const RationalNevanlinna& tau);

// The same relation assembled from the limits of tau0:
// {{h, -N h + B psi + k} : h in dom N, psi in H0, k in K}.
LinearRelation compression_param_from_limits(const RationalNevanlinna& tau);

// tau_inf = {{h, P_{ker B} A h + h' + k} : h in ker B, h' in ran B, k in K}.
LinearRelation tau_infinity(const RationalNevanlinna& tau);

// C(Ã_tau) = A_{tau_c}.
LinearRelation compression(const BoundaryTriplet& t, const RationalNevanlinna& tau);

struct CompressionFlags {
  bool subset_A0 = false;
  bool equals_A0 = false;
  bool equals_A = false;
  bool self_adjoint = false;
  bool transversal_with_A0 = false;

  bool operator==(const CompressionFlags&) const = default;
  bool consistent() const;
};

// Residual threshold for the geometric flag tests.
inline constexpr double kFlagTol = 1e-7;

struct CompressionReport {
  LinearRelation tau_c;
  LinearRelation C;
  LinearRelation tau_infinity;
  CompressionFlags geometric;   // read off C by relation algebra
  CompressionFlags asymptotic;  // read off the limits of tau
  bool routes_agree = false;
  std::optional<Matrix> N_tau_matrix;  // lim tau(iy), present iff transversal
  // When transversal: distance between C and A_{-N_tau}.
  double transversal_form_residual = 0.0;
  Index n_r = 0;
};

// Both routes are always computed; use classify_compression to turn a
// disagreement into an error.
CompressionReport assess_compression(const BoundaryTriplet& t, const RationalNevanlinna& tau);

// Throws InternalError when the geometric and asymptotic routes disagree.
CompressionReport classify_compression(const BoundaryTriplet& t, const RationalNevanlinna& tau);

}  // namespace relext
