#ifndef MODICA_PHI_HPP
#define MODICA_PHI_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modica/smallvec.hpp"

namespace modica {

/// Thrown when a normalized quantity is requested where the radial
/// ellipticity factor is not positive.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a structural hypothesis on the model parameters fails; the
/// message names the violated inequality.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One power term of the sum-of-powers operator: weight c > 0, shift
/// b >= 0, exponent p >= 1.
struct PhiTerm {
  double c = 1.0;
  double b = 0.0;
  double p = 2.0;
};

struct PhiDerivs {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};

/// The operator profile Phi on [0, inf). Either a sum-of-powers family,
///   Phi(r) = sum_k (2 c_k / p_k) [ (b_k + r)^{p_k/2} - b_k^{p_k/2} ],
/// or a custom profile given by callables for Phi and its first three
/// derivatives. Immutable after construction.
class PhiModel {
 public:
  using Fn = std::function<double(double)>;

  static PhiModel family(std::vector<PhiTerm> terms);
  static PhiModel custom(Fn phi, Fn phi1, Fn phi2, Fn phi3,
                         bool check_derivatives = false);

  bool is_family() const { return is_family_; }
  const std::vector<PhiTerm>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  /// True when some term has b_k = 0 and p_k < 2 (the profile slope blows
  /// up at r = 0).
  bool singular_at_zero() const;
  /// True when the three derivative sums are finite at r = 0 (every term
  /// has b_k > 0 or p_k >= 4).
  bool derivatives_finite_at_zero() const;

  /// Phi(r), r >= 0. Phi(0) = 0 by construction for families.
  double phi(double r) const;

  /// Phi'(r) alone; defined at r = 0 unless the profile is singular there.
  /// Flux kernels use this with the degenerate-face regularization.
  double phi_prime(double r) const;

  /// (Phi', Phi'', Phi''') at r. Requires r > 0, or r = 0 when the sums
  /// are finite there.
  PhiDerivs derivatives(double r) const;

  /// Radial ellipticity factor 2 r Phi''(r) + Phi'(r), via the closed form
  ///   sum_k c_k (b_k + r)^{(p_k-4)/2} [ (p_k - 1) r + b_k ]
  /// for families. Requires r > 0.
  double lambda(double r) const;

  /// Gradient part of the P-function, 2 r Phi'(r) - Phi(r); equals 0 at
  /// r = 0 (limit value for singular families).
  double gamma(double r) const;

 private:
  PhiModel() = default;
  bool is_family_ = true;
  std::vector<PhiTerm> terms_;
  Fn phi_, phi1_, phi2_, phi3_;
  bool check_derivatives_ = false;
};

/// Minimum of lambda over an inclusive log-spaced grid on [r_lo, r_hi].
double lambda_grid_floor(const PhiModel& model, double r_lo, double r_hi, int points);

/// Inverse of gamma by bisection on [0, r_max]. gamma is strictly
/// increasing there because gamma' = lambda, which must be positive on
/// (0, r_max] (checked via the lambda grid floor). The returned r satisfies
/// |r - gamma^{-1}(s)| <= tol; the residual |gamma(r) - s| is bounded by
/// tol times the local slope.
double psi_invert(const PhiModel& model, double s, double r_max, double tol = 1e-12);

/// Coefficient matrix of the divergence-form operator at gradient sigma:
///   a_ij = 2 Phi''(|sigma|^2) sigma_i sigma_j + Phi'(|sigma|^2) delta_ij.
struct CoefficientMatrix {
  SmallMat entries;
  SmallVec sigma;
};

CoefficientMatrix coefficient_matrix(const PhiModel& model, const SmallVec& sigma);

/// a_ij / lambda(|sigma|^2); the quadratic form at sigma/|sigma| equals 1.
SmallMat normalized_matrix(const PhiModel& model, const SmallVec& sigma);

}  // namespace modica

#endif
