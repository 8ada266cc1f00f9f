#pragma once

// Matrix-valued Nevanlinna parameters.
//
// A rational parameter tau on C^d has a constant multivalued part K and an
// operator part on H0 = K^perp:
//
//   tau(lambda) = {{h, tau0(lambda) h + k} : h in H0, k in K},
//   tau0(lambda) = A + lambda B + sum_j (alpha_j - lambda)^{-1} A_j,
//
// with A Hermitian, B >= 0, A_j >= 0 and nonzero, alpha_j real and distinct.
// Coefficients are d x d matrices in C^d coordinates that vanish on K.

#include <functional>
#include <string>
#include <vector>

#include "relext/linrel.hpp"
#include "relext/types.hpp"

namespace relext {

struct Pole {
  double alpha = 0.0;
  Matrix coef;
};

// Raw coefficient data as read from an instance file.
struct TauCoefficients {
  Index dim = 0;
  Matrix mul_basis = Matrix(0, 0);  // dim x k, spans K
  Matrix A = Matrix(0, 0);
  Matrix B = Matrix(0, 0);
  std::vector<Pole> poles;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_tau(const TauCoefficients& c, double tol = kDefaultTol);

class RationalNevanlinna {
 public:
  RationalNevanlinna() = default;
  // Throws InputError listing every violated condition.
  explicit RationalNevanlinna(const TauCoefficients& c, double tol = kDefaultTol);

  Index dim() const { return dim_; }
  double tol() const { return tol_; }
  const Matrix& mul_frame() const { return mul_frame_; }
  const Matrix& h0_frame() const { return h0_frame_; }
  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const std::vector<Pole>& poles() const { return poles_; }

  // tau0(lambda) as a d x d matrix supported on H0. Throws InputError at a pole.
  Matrix tau0(Complex lambda) const;
  // tau0(lambda) in H0 coordinates.
  Matrix tau0_h0(Complex lambda) const;

  // rank B + sum_j rank A_j.
  Index model_dim() const;

 private:
  Index dim_ = 0;
  double tol_ = kDefaultTol;
  Matrix mul_frame_ = Matrix(0, 0);
  Matrix h0_frame_ = Matrix(0, 0);
  Matrix A_ = Matrix(0, 0);
  Matrix B_ = Matrix(0, 0);
  std::vector<Pole> poles_;
};

// tau(lambda) as a relation in C^d.
LinearRelation eval_tau(const RationalNevanlinna& tau, Complex lambda);

// H0 = H' (+) H'' with H'' = ker Im tau0 = ker B  ∩  ker A_1 ∩ ... ∩ ker A_l and
//
//   tau0 = [[ tau1, -B1 ], [ -B1^*, -B2 ]]   on H' (+) H''.
//
// B1 and B2 follow this sign convention, the one used by the boundary
// reduction S = A_{theta0}, theta0 = {{h, B1 h + B2 h + k}}.
struct TauDecomposition {
  Matrix hprime_frame;   // d x d'
  Matrix hsecond_frame;  // d x d''
  Matrix mul_frame;      // d x k
  Matrix B1;             // d' x d'', map H'' -> H' in frame coordinates
  Matrix B2;             // d'' x d'', Hermitian
  RationalNevanlinna tau1;  // on C^{d'} (H' coordinates), Im tau1(i) > 0
};

TauDecomposition decompose_tau(const RationalNevanlinna& tau);

// tau(lambda) rebuilt from a decomposition.
LinearRelation reassemble_tau(const TauDecomposition& dec, Complex lambda, double tol = kDefaultTol);

struct TauLimits {
  Matrix B_tau;        // d x d, = B
  Matrix N_dom_frame;  // d x k, frame of dom N_{tau0} = ker B within H0
  Matrix N_matrix;     // d x k, N_{tau0} h = A h on the columns of N_dom_frame
  double numeric_residual = 0.0;  // worst disagreement with the grid estimate
};

// y = 10^{1 + k/2}, k = 0..10.
const std::vector<double>& default_y_grid();

// Analytic limits of tau0, cross-checked on the default y grid. Throws
// InternalError when the two disagree by more than 1e-6.
TauLimits tau_limits(const RationalNevanlinna& tau);

// A Nevanlinna function known only through evaluations.
class BlackBoxNevanlinna {
 public:
  using Evaluator = std::function<Matrix(Complex)>;

  // Spot-checks symmetry f(conj z) = f(z)^* and Im z Im f(z) >= 0 at a few
  // points off the real line; throws InputError on failure. thread_safe = false
  // declares the evaluator serial.
  BlackBoxNevanlinna(Index dim, Evaluator f, bool thread_safe = true, double tol = 1e-8);

  Index dim() const { return dim_; }
  bool thread_safe() const { return thread_safe_; }
  Matrix operator()(Complex z) const { return f_(z); }

 private:
  Index dim_;
  Evaluator f_;
  bool thread_safe_;
};

enum class Verdict { finite, divergent, undetermined };
const char* to_string(Verdict v);

struct DirectionVerdict {
  Vector direction;
  Verdict verdict = Verdict::undetermined;
  double last_value = 0.0;  // y Im(f(iy) h, h) at the largest grid point
  double limit = 0.0;       // extrapolated limit when verdict == finite
};

struct NumericLimits {
  Matrix B_estimate;
  bool B_confident = false;
  // Per standard basis direction e_1..e_d.
  std::vector<DirectionVerdict> basis_verdicts;
  // Per eigenvector of B_estimate, ascending eigenvalues.
  std::vector<DirectionVerdict> eigen_verdicts;
  // Span of the eigen directions with a finite verdict: estimate of dom N_f.
  Matrix dom_estimate;
  // Columns: N_f h for the columns h of dom_estimate.
  Matrix N_estimate;
  // False when any verdict is undetermined or B did not settle.
  bool confident = false;
};

// Needs at least three increasing positive grid points.
NumericLimits numeric_limits(const BlackBoxNevanlinna& f,
                             const std::vector<double>& y_grid = default_y_grid(),
                             double tol = kDefaultTol);

}  // namespace relext
