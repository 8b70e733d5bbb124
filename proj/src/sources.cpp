#include "modica/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modica/rng.hpp"

namespace modica {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

void check_scalar_fd(const char* name, const std::function<double(double)>& f, double claimed,
                     double x) {
  double h = 1e-5 * std::max(std::fabs(x), 1.0);
  double fd = (f(x + h) - f(x - h)) / (2.0 * h);
  if (std::fabs(claimed - fd) > 1e-5 * std::max({std::fabs(fd), std::fabs(claimed), 1.0}))
    throw std::runtime_error(std::string("derivative check failed for ") + name);
}

}  // namespace

SourceModel::SourceModel(ScalarFn f, ScalarFn fprime, GFn g, int eta_dim,
                         std::optional<double> beta, ScalarFn f0, bool check_derivatives)
    : f_(std::move(f)),
      fprime_(std::move(fprime)),
      f0_(std::move(f0)),
      g_(std::move(g)),
      eta_dim_(eta_dim),
      beta_(beta),
      check_(check_derivatives) {
  if (eta_dim_ < 0 || eta_dim_ > SmallVec::cap)
    throw PreconditionError("eta dimension must be between 0 and 4");
}

double SourceModel::f(double u) const { return f_(u); }

double SourceModel::fprime(double u) const {
  double v = fprime_(u);
  if (check_) check_scalar_fd("f'", f_, v, u);
  return v;
}

double SourceModel::F0(double r) const {
  if (f0_) {
    if (check_) check_scalar_fd("F0' = f", f0_, f_(r), r);
    return f0_(r);
  }
  return adaptive_simpson(f_, 0.0, r, 1e-10);
}

GEval SourceModel::g(const SmallVec& zeta, const SmallVec& eta) const {
  GEval e = g_(zeta, eta);
  if (!std::isfinite(e.g)) throw std::runtime_error("g evaluated to a non-finite value");
  if (check_) {
    for (int j = 0; j < zeta.n; ++j) {
      SmallVec zp = zeta, zm = zeta;
      double h = 1e-5 * std::max(std::fabs(zeta[j]), 1.0);
      zp[j] += h;
      zm[j] -= h;
      double fd = (g_(zp, eta).g - g_(zm, eta).g) / (2.0 * h);
      if (std::fabs(e.g_zeta[j] - fd) > 1e-5 * std::max({std::fabs(fd), std::fabs(e.g_zeta[j]), 1.0}))
        throw std::runtime_error("g_zeta partial check failed at component " + std::to_string(j));
    }
    for (int j = 0; j < eta.n; ++j) {
      SmallVec ep = eta, em = eta;
      double h = 1e-5 * std::max(std::fabs(eta[j]), 1.0);
      ep[j] += h;
      em[j] -= h;
      double fd = (g_(zeta, ep).g - g_(zeta, em).g) / (2.0 * h);
      if (std::fabs(e.g_eta[j] - fd) > 1e-5 * std::max({std::fabs(fd), std::fabs(e.g_eta[j]), 1.0}))
        throw std::runtime_error("g_eta partial check failed at component " + std::to_string(j));
    }
  }
  return e;
}

SOperator SOperator::identity() {
  SOperator s;
  s.variant_ = Variant::identity;
  return s;
}

SOperator SOperator::power_u(double q) {
  if (!(q >= 1.0)) throw PreconditionError("power operator requires q >= 1");
  SOperator s;
  s.variant_ = Variant::power_u;
  s.q_ = q;
  return s;
}

SOperator SOperator::drift_field(VecFn c, MatFn dc, ScalarFn h, ScalarFn hprime) {
  SOperator s;
  s.variant_ = Variant::drift_field;
  s.c_ = std::move(c);
  s.dc_ = std::move(dc);
  s.h_ = std::move(h);
  s.hprime_ = std::move(hprime);
  return s;
}

SOperator SOperator::constant_drift(SmallVec c, ScalarFn h, ScalarFn hprime) {
  SOperator s;
  s.variant_ = Variant::constant_drift;
  s.c_const_ = c;
  s.h_ = std::move(h);
  s.hprime_ = std::move(hprime);
  return s;
}

std::string SOperator::name() const {
  switch (variant_) {
    case Variant::identity: return "identity";
    case Variant::power_u: return "power_u";
    case Variant::drift_field: return "drift_field";
    case Variant::constant_drift: return "constant_drift";
  }
  return "?";
}

int SOperator::eta_dim(int n) const {
  switch (variant_) {
    case Variant::identity:
    case Variant::power_u: return 1;
    case Variant::drift_field:
    case Variant::constant_drift: return n + 1;
  }
  return 1;
}

SOperator::SEval SOperator::eval(double u, const SmallVec& grad_u, const SmallVec& x) const {
  int n = grad_u.n;
  SEval out;
  switch (variant_) {
    case Variant::identity: {
      out.value = SmallVec(1);
      out.value[0] = u;
      out.dvalue = SmallMat(1, n);
      for (int k = 0; k < n; ++k) out.dvalue.at(0, k) = grad_u[k];
      return out;
    }
    case Variant::power_u: {
      out.value = SmallVec(1);
      out.value[0] = std::pow(std::fabs(u), q_ - 1.0) * u;
      out.dvalue = SmallMat(1, n);
      double w = q_ * std::pow(std::fabs(u), q_ - 1.0);
      for (int k = 0; k < n; ++k) out.dvalue.at(0, k) = w * grad_u[k];
      return out;
    }
    case Variant::drift_field: {
      SmallVec c = c_(x);
      SmallMat dc = dc_(x);
      out.value = SmallVec(n + 1);
      for (int j = 0; j < n; ++j) out.value[j] = c[j];
      out.value[n] = h_(u);
      out.dvalue = SmallMat(n + 1, n);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.dvalue.at(j, k) = dc.at(j, k);
      double hp = hprime_(u);
      for (int k = 0; k < n; ++k) out.dvalue.at(n, k) = hp * grad_u[k];
      return out;
    }
    case Variant::constant_drift: {
      out.value = SmallVec(n + 1);
      for (int j = 0; j < n; ++j) out.value[j] = c_const_[j];
      out.value[n] = h_(u);
      out.dvalue = SmallMat(n + 1, n);
      double hp = hprime_(u);
      for (int k = 0; k < n; ++k) out.dvalue.at(n, k) = hp * grad_u[k];
      return out;
    }
  }
  return out;
}

CheckReport check_homogeneity(const SourceModel& src, uint64_t samples, uint64_t seed,
                              double zeta_max, double eta_max) {
  if (!src.beta()) throw PreconditionError("homogeneity check requires a declared beta");
  double beta = *src.beta();
  CheckReport rep;
  rep.samples = samples;
  for (uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i);
    SmallVec zeta(3);
    zeta.n = 1 + static_cast<int>(i % 3);
    for (int j = 0; j < zeta.n; ++j) zeta[j] = rng.uniform(-zeta_max, zeta_max);
    SmallVec eta(src.eta_dim());
    for (int j = 0; j < eta.n; ++j) eta[j] = rng.uniform(-eta_max, eta_max);
    double lam = rng.uniform(0.1, 10.0);

    GEval base = src.g(zeta, eta);
    GEval scaled = src.g(lam * zeta, eta);
    double expect = std::pow(lam, beta) * base.g;
    double scale_err = std::fabs(scaled.g - expect);
    if (scale_err > 1e-9 * std::max({std::fabs(scaled.g), std::fabs(expect), 1e-300})) {
      rep.pass = false;
      rep.worst = std::max(rep.worst, scale_err);
      if (rep.witness.empty())
        rep.witness = "scaling identity fails at sample " + std::to_string(i) +
                      " with lambda = " + std::to_string(lam);
    }
    double euler = dot(base.g_zeta, zeta) - beta * base.g;
    if (std::fabs(euler) > 1e-6 * (1.0 + std::fabs(base.g))) {
      rep.pass = false;
      rep.worst = std::max(rep.worst, std::fabs(euler));
      if (rep.witness.empty())
        rep.witness = "degree identity fails at sample " + std::to_string(i);
    }
  }
  return rep;
}

CheckReport check_monotonicity_eta(const SourceModel& src, uint64_t samples, uint64_t seed,
                                   double zeta_max, double eta_max) {
  if (src.eta_dim() != 1)
    throw PreconditionError("monotonicity check requires a scalar eta");
  CheckReport rep;
  rep.samples = samples;
  for (uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i);
    SmallVec zeta(3);
    zeta.n = 1 + static_cast<int>(i % 3);
    for (int j = 0; j < zeta.n; ++j) zeta[j] = rng.uniform(-zeta_max, zeta_max);
    double e1 = rng.uniform(-eta_max, eta_max);
    double e2 = rng.uniform(-eta_max, eta_max);
    if (e1 > e2) std::swap(e1, e2);
    SmallVec lo{e1}, hi{e2};
    double glo = src.g(zeta, lo).g, ghi = src.g(zeta, hi).g;
    if (ghi - glo < -1e-12) {
      rep.pass = false;
      rep.worst = std::min(rep.worst, ghi - glo);
      if (rep.witness.empty())
        rep.witness = "g decreases in eta at sample " + std::to_string(i);
    }
  }
  return rep;
}

const char* case_condition_name(CaseCondition c) {
  switch (c) {
    case CaseCondition::matched_degree: return "matched_degree";
    case CaseCondition::quadratic_growth: return "quadratic_growth";
    case CaseCondition::unit_degree: return "unit_degree";
    case CaseCondition::dominant_degree: return "dominant_degree";
    case CaseCondition::homogeneous_low_degree: return "homogeneous_low_degree";
    case CaseCondition::homogeneous_critical: return "homogeneous_critical";
  }
  return "?";
}

CaseVerdict classify_case(const PhiModel& family, const SourceModel& src, uint64_t samples,
                          uint64_t seed, double zeta_max, double eta_max) {
  if (!family.is_family()) throw PreconditionError("case classification requires a family");
  if (!src.beta()) throw PreconditionError("case classification requires a declared beta");
  if (src.eta_dim() != 1)
    throw PreconditionError("case classification applies to S(u) = u, i.e. scalar eta");
  double beta = *src.beta();
  const auto& t = family.terms();
  int m = static_cast<int>(t.size());
  double p1 = t.front().p, pm = t.back().p, b1 = t.front().b;
  bool all_b_zero = std::all_of(t.begin(), t.end(), [](const PhiTerm& x) { return x.b == 0.0; });

  // sampled sign evidence for f(eta) g(zeta, eta)
  double fg_min = std::numeric_limits<double>::infinity();
  double fg_max = -fg_min;
  for (uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i);
    SmallVec zeta(3);
    zeta.n = 1 + static_cast<int>(i % 3);
    for (int j = 0; j < zeta.n; ++j) zeta[j] = rng.uniform(-zeta_max, zeta_max);
    double eta_val = rng.uniform(-eta_max, eta_max);
    SmallVec eta{eta_val};
    double fg = src.f(eta_val) * src.g(zeta, eta).g;
    fg_min = std::min(fg_min, fg);
    fg_max = std::max(fg_max, fg);
  }
  const double slack = 1e-12;
  bool fg_nonneg = fg_min >= -slack;
  bool fg_nonpos = fg_max <= slack;

  CaseVerdict verdict;
  verdict.fg_min = fg_min;
  verdict.fg_max = fg_max;
  verdict.notes = "sign conditions sampled on |zeta_j| <= " + std::to_string(zeta_max) +
                  ", |eta| <= " + std::to_string(eta_max);

  auto signed_ok = [&](double factor) {
    if (factor > 0.0) return fg_nonneg;
    if (factor < 0.0) return fg_nonpos;
    return true;
  };

  if (m == 1 && beta == p1 - 1.0 && signed_ok(p1 - 2.0))
    verdict.matched.push_back(CaseCondition::matched_degree);
  if (m == 1 && p1 == 2.0 && signed_ok(beta - 1.0))
    verdict.matched.push_back(CaseCondition::quadratic_growth);
  if (m == 1 && beta == 1.0 && signed_ok(2.0 - p1))
    verdict.matched.push_back(CaseCondition::unit_degree);
  if (beta >= std::max(1.0, pm - 1.0) && fg_nonneg)
    verdict.matched.push_back(CaseCondition::dominant_degree);
  if (all_b_zero && beta <= p1 - 1.0 && fg_nonpos)
    verdict.matched.push_back(CaseCondition::homogeneous_low_degree);
  if (m == 1 && b1 == 0.0 && beta == p1 - 1.0)
    verdict.matched.push_back(CaseCondition::homogeneous_critical);
  return verdict;
}

double xi_sign(const PhiModel& family, double fg, double r, double beta) {
  return fg * beta_phi_minus_lambda(family, beta, r);
}

double beta_phi_minus_lambda(const PhiModel& family, double beta, double r) {
  if (!family.is_family())
    throw PreconditionError("beta_phi_minus_lambda requires a family");
  if (!(r > 0.0)) throw std::domain_error("beta_phi_minus_lambda requires r > 0");
  double s = 0.0;
  for (const auto& t : family.terms())
    s += t.c * std::pow(t.b + r, 0.5 * (t.p - 4.0)) *
         ((beta - 1.0) * t.b + (beta - t.p + 1.0) * r);
  return s;
}

}  // namespace modica
