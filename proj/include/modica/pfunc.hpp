#ifndef MODICA_PFUNC_HPP
#define MODICA_PFUNC_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "modica/ellipticity.hpp"
#include "modica/field_ops.hpp"
#include "modica/grid.hpp"
#include "modica/phi.hpp"
#include "modica/sources.hpp"

namespace modica {

using GradientFn = std::function<SmallVec(const SmallVec&)>;

/// Potential gauge pinned to a field: F(r) = F0(r) - c_u with
/// c_u = min over nodes of F0(u(x)), so min F(u) = 0 on the grid.
struct Gauge {
  std::function<double(double)> F0;
  double c_u = 0.0;
  double u_min = 0.0, u_max = 0.0;  // range of the field it was built on
  int64_t field_size = 0;

  double F(double r) const { return F0(r) - c_u; }
};

Gauge build_gauge(const SourceModel& src, const ScalarField& field);

/// Node set {|grad u| > delta}: the default threshold below which discrete
/// gradients count as critical points.
double default_delta(const VectorField& grad);

/// Grid function that is only defined on a node subset; excluded nodes hold
/// NaN (the masked sentinel used by the CSV output as well).
struct MaskedField {
  Grid grid;
  std::vector<double> values;
  std::vector<char> mask;  // 1 = defined

  int64_t defined_count() const;
  double min_defined(int64_t* argmin = nullptr) const;
  double max_defined(int64_t* argmax = nullptr) const;
};

enum class DerivativeMode { analytic, finite_difference };

struct PReport {
  ScalarField p_values;
  double max_p = 0.0;
  int64_t argmax = -1;
  int64_t violation_count = 0;  // admissible nodes with P > tol
  int64_t admissible_count = 0;
  double tol = 0.0;
  DerivativeMode mode = DerivativeMode::finite_difference;
};

/// P(x) = gamma(|grad u|^2) - 2 F(u): the gradient-bound statement is
/// P <= 0. In analytic mode the caller supplies the exact gradient; tol
/// defaults to 1e-10 there and to 10 h^2 in finite-difference mode.
/// Clamped grids restrict the statistics to nodes at least 3 from the
/// boundary.
PReport p_field(const PhiModel& model, const Gauge& gauge, const ScalarField& field,
                DerivativeMode mode, const GradientFn& exact_grad = nullptr, double tol = -1.0);

/// Drift coefficient of the P-function inequality:
/// B_i = -2 f(u)/lambda (1 + r Phi''/Phi') u_i - (r/lambda) g_zeta_i,
/// with r = |grad u|^2, on the node set {|grad u| > delta}.
struct DriftResult {
  VectorField b;
  std::vector<char> mask;
};
DriftResult drift_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                        const ScalarField& field, double delta = -1.0);

/// Pointwise remainder at a state (u, grad u) with |grad u| > 0:
///   -2 f g r / Phi' + 2 r sum_{k,j} g_eta_j dS[j]/dx_k u_k
///   + (2 f r / lambda) sum_j g_zeta_j u_j.
double remainder_state(const PhiModel& model, const SourceModel& src, const SOperator& s,
                       double u, const SmallVec& grad_u, const SmallVec& x);

MaskedField remainder_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                            const ScalarField& field, double delta = -1.0);

/// Checks the homogeneous-source lower bound
///   remainder >= (2 f g r / (lambda Phi')) (beta Phi' - lambda)
/// pointwise on the admissible nodes. Requires S(u) = u, a declared beta,
/// and g nondecreasing in eta (sampled on the field's states).
struct BoundCheckReport {
  bool pass = true;
  double min_slack = 0.0;  // min of (remainder - bound)
  int64_t argmin = -1;
  int64_t checked = 0;
  double g_eta_min = 0.0;
};
BoundCheckReport remainder_lower_bound_check(const PhiModel& family, const SourceModel& src,
                                             const ScalarField& field, double delta = -1.0);

/// Residual of the interior inequality satisfied by P on a solution:
///   sum_ij r d_j(d_ij d_i P) + sum_i B_i d_i P - |grad P|^2 / (2 lambda)
///   - remainder >= 0 (up to discretization).
/// The d grad P divergence is assembled conservatively on faces. An
/// optional exact gradient replaces the discrete grad u everywhere it
/// appears. Nodes are admissible when the whole 3^d neighborhood clears
/// the delta threshold (and the 3-node boundary margin on clamped grids).
struct LemmaReport {
  MaskedField residual;
  double min_residual = 0.0;
  int64_t argmin = -1;
  int64_t admissible_count = 0;
  double pde_residual_norm = 0.0;
  bool solution_warning = false;  // input does not look like a solution
};
LemmaReport lemma_residual(const PhiModel& model, const SourceModel& src, const SOperator& s,
                           const ScalarField& field, double delta = -1.0,
                           const GradientFn& exact_grad = nullptr);

/// Exponent of the touching-point classification: p under the power regime
/// with p > 2, else 2.
double rigidity_p_hat(Regime regime, double p);

struct RigidityInput {
  int64_t x0 = -1;  // candidate touching node; -1 searches the grid
  double r0 = 0.0;
  double p_hat = 2.0;
  int ratio_levels = 40;  // geometric radii 2^-j around r0
};

struct RigidityVerdict {
  bool applicable = false;     // all hypotheses met on this field
  bool field_constant = false; // max |u - r0| <= tol
  bool pass = true;            // false only when applicable but nonconstant
  std::string reason;
  double gauge_value = 0.0;    // F(r0)
  double gauge_slope = 0.0;    // F'(r0) = f(r0)
  double touch_gap = 0.0;
  double ratio_max = 0.0;      // sampled sup of |F'(r)| / |r - r0|^{p-1}
  double ratio_slope = 0.0;    // log-log growth of the sampled ratios
  double c0 = 0.0;             // sampled constant of |F(r)-F(r0)| <= c0 |r-r0|^p_hat
  double epsilon = 0.0;        // sampled floor of gamma(r) / r^{p_hat/2}
  double gronwall_constant = 0.0;  // (2 c0 / epsilon)^{1/p_hat}
  int64_t witness = -1;        // node violating constancy, when any
};

/// Touching-point classification check: if F and F' vanish at r0, u touches
/// r0, and (for p_hat > 2) the sampled ratio stays bounded, the field must
/// be constant; a nonconstant field is reported as a contradiction witness.
RigidityVerdict rigidity_check(const PhiModel& model, const SourceModel& src, const Gauge& gauge,
                               const ScalarField& field, const RigidityInput& input, double tol);

/// Sharpness suite for the radial profile u = |x|^beta against the
/// p-homogeneous operator, requiring beta > max(2, p/(p-2)):
/// (a) the numeric divergence of the analytic flux matches F'(u) at sampled
///     points off the origin, (b) the ratio |F'(r)| / r^{p-1} grows like
///     r^{-p/beta} in a log-log fit, (c) F(0) = F'(0) = 0.
struct CounterexampleReport {
  double max_rel_residual = 0.0;
  double value_at_unit = 0.0;  // divergence sampled at |x| = 1
  double slope = 0.0;
  double slope_expected = 0.0;
  double f_origin = 0.0;
  double fprime_origin = 0.0;
  bool pass_pde = false;
  bool pass_slope = false;
  bool pass_origin = false;
  bool pass() const { return pass_pde && pass_slope && pass_origin; }
};
CounterexampleReport counterexample_suite(double p, double beta, int n, uint64_t samples = 1000,
                                          uint64_t seed = 2026);

/// Smallest sampled C with gamma(r) <= C sqrt(r) on a log grid over
/// (1e-8 M^2, M^2]; the regime argument documents which envelope the
/// caller certified (the sampled bound itself is envelope-free).
double gamma_sqrt_bound(const PhiModel& model, double M, Regime regime);

}  // namespace modica

#endif
