#ifndef MODICA_SOURCES_HPP
#define MODICA_SOURCES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modica/phi.hpp"
#include "modica/smallvec.hpp"

namespace modica {

struct GEval {
  double g = 0.0;
  SmallVec g_zeta;  // n components
  SmallVec g_eta;   // m components
};

/// The nonlinearities of the right-hand side f(u) + g(grad u, Su).
/// g takes (zeta, eta) in R^n x R^m and returns its value with all first
/// partials. Callables must be reentrant; in check mode every evaluation is
/// cross-checked against central finite differences.
class SourceModel {
 public:
  using ScalarFn = std::function<double(double)>;
  using GFn = std::function<GEval(const SmallVec&, const SmallVec&)>;

  SourceModel(ScalarFn f, ScalarFn fprime, GFn g, int eta_dim,
              std::optional<double> beta = std::nullopt, ScalarFn f0 = nullptr,
              bool check_derivatives = false);

  double f(double u) const;
  double fprime(double u) const;
  /// Antiderivative of f from 0; adaptive Simpson when no closed form was
  /// supplied.
  double F0(double r) const;

  GEval g(const SmallVec& zeta, const SmallVec& eta) const;

  int eta_dim() const { return eta_dim_; }
  std::optional<double> beta() const { return beta_; }
  bool has_closed_form_f0() const { return static_cast<bool>(f0_); }

 private:
  ScalarFn f_, fprime_, f0_;
  GFn g_;
  int eta_dim_;
  std::optional<double> beta_;
  bool check_ = false;
};

/// The operator S feeding the eta slot of g. Each variant evaluates Su
/// pointwise from (u, grad u, x) together with the spatial derivative
/// table dS[j]/dx_k.
class SOperator {
 public:
  using VecFn = std::function<SmallVec(const SmallVec&)>;   // c(x)
  using MatFn = std::function<SmallMat(const SmallVec&)>;   // dc_j/dx_k
  using ScalarFn = std::function<double(double)>;

  enum class Variant { identity, power_u, drift_field, constant_drift };

  static SOperator identity();
  static SOperator power_u(double q);
  /// Su = (c(x), h(u)); dc supplies the Jacobian of c.
  static SOperator drift_field(VecFn c, MatFn dc, ScalarFn h, ScalarFn hprime);
  /// Su = (c, h(u)) with constant c.
  static SOperator constant_drift(SmallVec c, ScalarFn h, ScalarFn hprime);

  Variant variant() const { return variant_; }
  std::string name() const;
  int eta_dim(int n) const;  // 1, or n+1 for the drift variants

  struct SEval {
    SmallVec value;    // m components
    SmallMat dvalue;   // m x n spatial derivatives
  };
  SEval eval(double u, const SmallVec& grad_u, const SmallVec& x) const;

  double q() const { return q_; }

 private:
  SOperator() = default;
  Variant variant_ = Variant::identity;
  double q_ = 1.0;
  VecFn c_;
  MatFn dc_;
  SmallVec c_const_;
  ScalarFn h_, hprime_;
};

struct CheckReport {
  bool pass = true;
  uint64_t samples = 0;
  double worst = 0.0;       // most violating residual seen
  std::string witness;      // description of the failing sample, if any
};

/// Scaling identity g(lambda zeta, eta) = lambda^beta g(zeta, eta) and the
/// degree identity grad_zeta g . zeta = beta g, verified on sampled states.
CheckReport check_homogeneity(const SourceModel& src, uint64_t samples, uint64_t seed,
                              double zeta_max = 2.0, double eta_max = 2.0);

/// g nondecreasing in a scalar eta, verified on sampled pairs.
CheckReport check_monotonicity_eta(const SourceModel& src, uint64_t samples, uint64_t seed,
                                   double zeta_max = 2.0, double eta_max = 2.0);

/// Structural conditions under which the remainder has a sign. Equalities
/// on (m, b_k, beta, p_k) are exact; sign conditions on f g are sampled.
enum class CaseCondition {
  matched_degree,          // m = 1, beta = p1 - 1, (p1 - 2) f g >= 0
  quadratic_growth,        // m = 1, p1 = 2, (beta - 1) f g >= 0
  unit_degree,             // m = 1, beta = 1, (2 - p1) f g >= 0
  dominant_degree,         // beta >= max(1, pm - 1), f g >= 0
  homogeneous_low_degree,  // all b = 0, beta <= p1 - 1, f g <= 0
  homogeneous_critical,    // m = 1, b1 = 0, beta = p1 - 1
};

const char* case_condition_name(CaseCondition c);

struct CaseVerdict {
  std::vector<CaseCondition> matched;
  double fg_min = 0.0;  // sampled min of f(eta) g(zeta, eta)
  double fg_max = 0.0;
  std::string notes;
};

/// Evaluates every condition against the family parameters and the sampled
/// sign evidence (evidence, not proof).
CaseVerdict classify_case(const PhiModel& family, const SourceModel& src, uint64_t samples,
                          uint64_t seed, double zeta_max = 2.0, double eta_max = 2.0);

/// f g * sum_k c_k (b_k + r)^{(p_k-4)/2} [ (beta-1) b_k + (beta-p_k+1) r ];
/// nonnegative under any matched condition with the matching sign of f g.
double xi_sign(const PhiModel& family, double fg, double r, double beta);

/// beta Phi'(r) - lambda(r) through the same per-term closed form.
double beta_phi_minus_lambda(const PhiModel& family, double beta, double r);

}  // namespace modica

#endif
