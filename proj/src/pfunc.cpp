#include "modica/pfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modica/reduce.hpp"
#include "modica/rng.hpp"
#include "modica/solver.hpp"

namespace modica {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

VectorField sampled_gradient(const ScalarField& field, const GradientFn& exact_grad) {
  const Grid& g = field.grid();
  if (!exact_grad) return gradient_of(field);
  VectorField out(g, g.dim());
  for (int64_t i = 0; i < g.size(); ++i) {
    SmallVec gv = exact_grad(g.node_coords(g.unpack(i)));
    for (int a = 0; a < g.dim(); ++a) out.at(a, i) = gv[a];
  }
  return out;
}

// First derivative of an arbitrary node array (same stencils as the field
// kernels; local helper so this module stays self-contained).
double node_d1(const Grid& g, const std::vector<double>& v, std::array<int, 3> idx, int axis) {
  double h = g.spacing(axis);
  int i = idx[axis];
  int n = g.npts(axis);
  if (g.is_periodic() || (i > 0 && i < n - 1)) {
    auto ip = idx, im = idx;
    ip[axis] = g.shifted(axis, i, +1);
    im[axis] = g.shifted(axis, i, -1);
    return (v[g.flat(ip)] - v[g.flat(im)]) / (2.0 * h);
  }
  auto i1 = idx, i2 = idx;
  if (i == 0) {
    i1[axis] = 1;
    i2[axis] = 2;
    return (-3.0 * v[g.flat(idx)] + 4.0 * v[g.flat(i1)] - v[g.flat(i2)]) / (2.0 * h);
  }
  i1[axis] = n - 2;
  i2[axis] = n - 3;
  return (3.0 * v[g.flat(idx)] - 4.0 * v[g.flat(i1)] + v[g.flat(i2)]) / (2.0 * h);
}

}  // namespace

Gauge build_gauge(const SourceModel& src, const ScalarField& field) {
  Gauge gauge;
  gauge.F0 = [src](double r) { return src.F0(r); };
  gauge.field_size = field.size();
  gauge.u_min = field[0];
  gauge.u_max = field[0];
  double c_u = std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < field.size(); ++i) {
    gauge.u_min = std::min(gauge.u_min, field[i]);
    gauge.u_max = std::max(gauge.u_max, field[i]);
    c_u = std::min(c_u, gauge.F0(field[i]));
  }
  gauge.c_u = c_u;
  return gauge;
}

double default_delta(const VectorField& grad) {
  double gmax = 0.0;
  for (int64_t i = 0; i < grad.grid().size(); ++i)
    gmax = std::max(gmax, norm(grad.vec_at(i)));
  return std::max(1e-6, 1e-3 * gmax);
}

int64_t MaskedField::defined_count() const {
  int64_t n = 0;
  for (char m : mask) n += m;
  return n;
}

double MaskedField::min_defined(int64_t* argmin) const {
  double best = std::numeric_limits<double>::infinity();
  int64_t arg = -1;
  for (int64_t i = 0; i < static_cast<int64_t>(values.size()); ++i)
    if (mask[i] && values[i] < best) {
      best = values[i];
      arg = i;
    }
  if (argmin) *argmin = arg;
  return best;
}

double MaskedField::max_defined(int64_t* argmax) const {
  double best = -std::numeric_limits<double>::infinity();
  int64_t arg = -1;
  for (int64_t i = 0; i < static_cast<int64_t>(values.size()); ++i)
    if (mask[i] && values[i] > best) {
      best = values[i];
      arg = i;
    }
  if (argmax) *argmax = arg;
  return best;
}

PReport p_field(const PhiModel& model, const Gauge& gauge, const ScalarField& field,
                DerivativeMode mode, const GradientFn& exact_grad, double tol) {
  const Grid& g = field.grid();
  if (mode == DerivativeMode::analytic && !exact_grad)
    throw PreconditionError("analytic mode needs the exact gradient callable");
  VectorField grad =
      sampled_gradient(field, mode == DerivativeMode::analytic ? exact_grad : nullptr);
  double h = g.max_spacing();
  if (tol < 0.0) tol = mode == DerivativeMode::analytic ? 1e-10 : 10.0 * h * h;

  PReport rep;
  rep.mode = mode;
  rep.tol = tol;
  ScalarField p(g, 0.0);
  rep.max_p = -std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < g.size(); ++i) {
    double r = norm2(grad.vec_at(i));
    double val = model.gamma(r) - 2.0 * gauge.F(field[i]);
    p[i] = val;
    if (!g.interior(g.unpack(i), 3)) continue;
    ++rep.admissible_count;
    if (val > rep.max_p) {
      rep.max_p = val;
      rep.argmax = i;
    }
    if (val > tol) ++rep.violation_count;
  }
  rep.p_values = std::move(p);
  return rep;
}

DriftResult drift_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                        const ScalarField& field, double delta) {
  const Grid& g = field.grid();
  VectorField grad = gradient_of(field);
  if (delta < 0.0) delta = default_delta(grad);
  DriftResult out{VectorField(g, g.dim()), std::vector<char>(g.size(), 0)};
  for (int64_t i = 0; i < g.size(); ++i) {
    SmallVec gv = grad.vec_at(i);
    double r = norm2(gv);
    if (!(std::sqrt(r) > delta)) {
      for (int a = 0; a < g.dim(); ++a) out.b.at(a, i) = kNaN;
      continue;
    }
    double lam = model.lambda(r);
    if (!(lam > 0.0))
      throw MonotonicityError("drift needs lambda > 0, got " + std::to_string(lam));
    PhiDerivs d = model.derivatives(r);
    auto se = s.eval(field[i], gv, g.node_coords(g.unpack(i)));
    GEval ge = src.g(gv, se.value);
    double fu = src.f(field[i]);
    double common = -2.0 * fu / lam * (1.0 + r * d.phi2 / d.phi1);
    for (int a = 0; a < g.dim(); ++a)
      out.b.at(a, i) = common * gv[a] - (r / lam) * ge.g_zeta[a];
    out.mask[i] = 1;
  }
  return out;
}

double remainder_state(const PhiModel& model, const SourceModel& src, const SOperator& s,
                       double u, const SmallVec& grad_u, const SmallVec& x) {
  double r = norm2(grad_u);
  if (!(r > 0.0)) throw std::domain_error("remainder needs a nonzero gradient");
  auto se = s.eval(u, grad_u, x);
  GEval ge = src.g(grad_u, se.value);
  double phi1 = model.phi_prime(r);
  double lam = model.lambda(r);
  double fu = src.f(u);

  double term1 = -2.0 * fu * ge.g * r / phi1;
  double term2 = 0.0;
  for (int j = 0; j < se.value.n; ++j) {
    double row = 0.0;
    for (int k = 0; k < grad_u.n; ++k) row += se.dvalue.at(j, k) * grad_u[k];
    term2 += ge.g_eta[j] * row;
  }
  term2 *= 2.0 * r;
  double term3 = 0.0;
  for (int j = 0; j < grad_u.n; ++j) term3 += ge.g_zeta[j] * grad_u[j];
  term3 *= 2.0 * fu * r / lam;
  return term1 + term2 + term3;
}

MaskedField remainder_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                            const ScalarField& field, double delta) {
  const Grid& g = field.grid();
  VectorField grad = gradient_of(field);
  if (delta < 0.0) delta = default_delta(grad);
  MaskedField out{g, std::vector<double>(g.size(), kNaN), std::vector<char>(g.size(), 0)};
  for (int64_t i = 0; i < g.size(); ++i) {
    SmallVec gv = grad.vec_at(i);
    if (!(norm(gv) > delta)) continue;
    out.values[i] = remainder_state(model, src, s, field[i], gv, g.node_coords(g.unpack(i)));
    out.mask[i] = 1;
  }
  return out;
}

BoundCheckReport remainder_lower_bound_check(const PhiModel& family, const SourceModel& src,
                                             const ScalarField& field, double delta) {
  if (!src.beta()) throw PreconditionError("the lower bound needs a declared beta");
  if (src.eta_dim() != 1)
    throw PreconditionError("the lower bound applies to S(u) = u, i.e. scalar eta");
  double beta = *src.beta();
  SOperator s = SOperator::identity();

  const Grid& g = field.grid();
  VectorField grad = gradient_of(field);
  if (delta < 0.0) delta = default_delta(grad);

  BoundCheckReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.g_eta_min = std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < g.size(); ++i) {
    SmallVec gv = grad.vec_at(i);
    double r = norm2(gv);
    if (!(std::sqrt(r) > delta)) continue;
    SmallVec x = g.node_coords(g.unpack(i));
    auto se = s.eval(field[i], gv, x);
    GEval ge = src.g(gv, se.value);
    rep.g_eta_min = std::min(rep.g_eta_min, ge.g_eta[0]);

    double rem = remainder_state(family, src, s, field[i], gv, x);
    double phi1 = family.phi_prime(r);
    double lam = family.lambda(r);
    double bound = 2.0 * src.f(field[i]) * ge.g * r / (lam * phi1) *
                   beta_phi_minus_lambda(family, beta, r);
    double slack = rem - bound;
    ++rep.checked;
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.argmin = i;
    }
  }
  if (rep.checked > 0 && rep.g_eta_min < -1e-12)
    throw PreconditionError("the lower bound needs g nondecreasing in eta; sampled min " +
                            std::to_string(rep.g_eta_min));
  rep.pass = rep.checked == 0 ||
             rep.min_slack >= -1e-9 * std::max(1.0, std::fabs(rep.min_slack));
  return rep;
}

LemmaReport lemma_residual(const PhiModel& model, const SourceModel& src, const SOperator& s,
                           const ScalarField& field, double delta, const GradientFn& exact_grad) {
  const Grid& g = field.grid();
  int dim = g.dim();
  VectorField grad = sampled_gradient(field, exact_grad);
  if (delta < 0.0) delta = default_delta(grad);

  Gauge gauge = build_gauge(src, field);

  LemmaReport rep;
  {
    ScalarField pde = residual_field(model, src, s, field);
    rep.pde_residual_norm = max_abs(pde.values());
    rep.solution_warning = rep.pde_residual_norm > 1e-6;
  }

  // node quantities
  std::vector<double> p(g.size());
  std::vector<char> ok(g.size(), 0);  // |grad u| > delta at the node
  for (int64_t i = 0; i < g.size(); ++i) {
    SmallVec gv = grad.vec_at(i);
    double r = norm2(gv);
    p[i] = model.gamma(r) - 2.0 * gauge.F(field[i]);
    ok[i] = std::sqrt(r) > delta ? 1 : 0;
  }

  // discrete grad P (central / one-sided)
  std::vector<std::vector<double>> dp(dim, std::vector<double>(g.size()));
  for (int a = 0; a < dim; ++a)
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < g.size(); ++i) dp[a][i] = node_d1(g, p, g.unpack(i), a);

  // normalized coefficient matrices where defined
  MatrixField dmat(g, dim);
  for (int64_t i = 0; i < g.size(); ++i) {
    if (!ok[i]) continue;
    SmallMat m = normalized_matrix(model, grad.vec_at(i));
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) dmat.at(a, b, i) = m.at(a, b);
  }

  MaskedField res{g, std::vector<double>(g.size(), kNaN), std::vector<char>(g.size(), 0)};
  rep.min_residual = std::numeric_limits<double>::infinity();

  auto neighbors_clear = [&](const std::array<int, 3>& idx) {
    std::array<int, 3> j = idx;
    int lo1 = dim > 1 ? -1 : 0, hi1 = dim > 1 ? 1 : 0;
    int lo2 = dim > 2 ? -1 : 0, hi2 = dim > 2 ? 1 : 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = lo1; b <= hi1; ++b)
        for (int c = lo2; c <= hi2; ++c) {
          j[0] = g.shifted(0, idx[0], a);
          if (dim > 1) j[1] = g.shifted(1, idx[1], b);
          if (dim > 2) j[2] = g.shifted(2, idx[2], c);
          if (!ok[g.flat(j)]) return false;
        }
    return true;
  };

  for (int64_t i = 0; i < g.size(); ++i) {
    auto idx = g.unpack(i);
    if (!g.interior(idx, 3) || !neighbors_clear(idx)) continue;

    SmallVec gv = grad.vec_at(i);
    double r = norm2(gv);
    double lam = model.lambda(r);

    // conservative divergence of the d grad P flux
    double div = 0.0;
    for (int a = 0; a < dim; ++a) {
      auto face_q = [&](const std::array<int, 3>& base) {
        auto up = base;
        up[a] = g.shifted(a, base[a], +1);
        int64_t ib = g.flat(base), iu = g.flat(up);
        double q = 0.0;
        for (int ii = 0; ii < dim; ++ii) {
          double dface = 0.5 * (dmat.at(ii, a, ib) + dmat.at(ii, a, iu));
          double dpi = ii == a ? (p[iu] - p[ib]) / g.spacing(a)
                               : 0.5 * (dp[ii][ib] + dp[ii][iu]);
          q += dface * dpi;
        }
        return q;
      };
      auto minus = idx;
      minus[a] = g.shifted(a, idx[a], -1);
      div += (face_q(idx) - face_q(minus)) / g.spacing(a);
    }
    double term_div = r * div;

    // drift term
    PhiDerivs der = model.derivatives(r);
    SmallVec x = g.node_coords(idx);
    auto se = s.eval(field[i], gv, x);
    GEval ge = src.g(gv, se.value);
    double fu = src.f(field[i]);
    double common = -2.0 * fu / lam * (1.0 + r * der.phi2 / der.phi1);
    double term_drift = 0.0;
    for (int a = 0; a < dim; ++a)
      term_drift += (common * gv[a] - (r / lam) * ge.g_zeta[a]) * dp[a][i];

    double grad_p2 = 0.0;
    for (int a = 0; a < dim; ++a) grad_p2 += dp[a][i] * dp[a][i];

    double rem = remainder_state(model, src, s, field[i], gv, x);

    double value = term_div + term_drift - grad_p2 / (2.0 * lam) - rem;
    res.values[i] = value;
    res.mask[i] = 1;
    ++rep.admissible_count;
    if (value < rep.min_residual) {
      rep.min_residual = value;
      rep.argmin = i;
    }
  }
  if (rep.admissible_count == 0) rep.min_residual = 0.0;
  rep.residual = std::move(res);
  return rep;
}

double rigidity_p_hat(Regime regime, double p) {
  return (regime == Regime::A && p > 2.0) ? p : 2.0;
}

RigidityVerdict rigidity_check(const PhiModel& model, const SourceModel& src, const Gauge& gauge,
                               const ScalarField& field, const RigidityInput& input, double tol) {
  RigidityVerdict v;
  v.gauge_value = gauge.F(input.r0);
  v.gauge_slope = src.f(input.r0);

  // constancy and witness, checked regardless of the hypotheses
  double gap_max = 0.0;
  int64_t witness = -1;
  for (int64_t i = 0; i < field.size(); ++i) {
    double gap = std::fabs(field[i] - input.r0);
    if (gap > gap_max) {
      gap_max = gap;
      witness = i;
    }
  }
  v.field_constant = gap_max <= tol;
  if (!v.field_constant) v.witness = witness;

  // touching point
  if (input.x0 >= 0 && input.x0 < field.size()) {
    v.touch_gap = std::fabs(field[input.x0] - input.r0);
  } else {
    v.touch_gap = std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < field.size(); ++i)
      v.touch_gap = std::min(v.touch_gap, std::fabs(field[i] - input.r0));
  }

  if (std::fabs(v.gauge_value) > tol || std::fabs(v.gauge_slope) > tol) {
    v.reason = "the gauge does not vanish to second order at r0";
    return v;
  }
  if (v.touch_gap > tol) {
    v.reason = "no touching point: u never attains r0 on the grid";
    return v;
  }

  // sampled ratio |F'(r)| / |r - r0|^{p-1} on geometric radii
  if (input.p_hat > 2.0) {
    double lx = 0.0, ly = 0.0, lxx = 0.0, lxy = 0.0;
    int cnt = 0;
    for (int j = 1; j <= input.ratio_levels; ++j) {
      double rad = std::ldexp(1.0, -j);
      double ratio = 0.0;
      for (double side : {-1.0, 1.0}) {
        double r = input.r0 + side * rad;
        ratio = std::max(ratio, std::fabs(src.f(r)) / std::pow(rad, input.p_hat - 1.0));
      }
      v.ratio_max = std::max(v.ratio_max, ratio);
      if (ratio > 0.0) {
        double X = std::log(rad), Y = std::log(ratio);
        lx += X;
        ly += Y;
        lxx += X * X;
        lxy += X * Y;
        ++cnt;
      }
    }
    if (cnt >= 2) {
      double denom = cnt * lxx - lx * lx;
      v.ratio_slope = denom != 0.0 ? (cnt * lxy - lx * ly) / denom : 0.0;
    }
    if (v.ratio_slope < -0.05) {
      v.reason = "the sampled gauge-slope ratio diverges near r0";
      return v;
    }
  }

  v.applicable = true;
  v.reason = v.field_constant ? "hypotheses met; the field is constant"
                              : "hypotheses met but the field is not constant";
  v.pass = v.field_constant;

  // classification constants (evidence only), when the field has a gradient
  VectorField grad = gradient_of(field);
  double M = 0.0;
  for (int64_t i = 0; i < field.grid().size(); ++i) M = std::max(M, norm(grad.vec_at(i)));
  for (int j = 1; j <= input.ratio_levels; ++j) {
    double rad = std::ldexp(1.0, -j);
    for (double side : {-1.0, 1.0}) {
      double r = input.r0 + side * rad;
      v.c0 = std::max(v.c0, std::fabs(gauge.F(r) - gauge.F(input.r0)) /
                                std::pow(rad, input.p_hat));
    }
  }
  if (M > 0.0) {
    double eps_floor = std::numeric_limits<double>::infinity();
    const int kPts = 2000;
    double lo = 1e-8 * M * M, hi = M * M;
    double step = std::pow(hi / lo, 1.0 / (kPts - 1));
    for (int i = 0; i < kPts; ++i) {
      double r = std::min(lo * std::pow(step, i), hi);
      eps_floor = std::min(eps_floor, model.gamma(r) / std::pow(r, 0.5 * input.p_hat));
    }
    v.epsilon = 0.5 * eps_floor;
    if (v.epsilon > 0.0 && v.c0 > 0.0)
      v.gronwall_constant = std::pow(2.0 * v.c0 / v.epsilon, 1.0 / input.p_hat);
  }
  return v;
}

CounterexampleReport counterexample_suite(double p, double beta, int n, uint64_t samples,
                                          uint64_t seed) {
  if (!(p > 2.0)) throw PreconditionError("the sharpness profile needs p > 2");
  if (!(beta > std::max(2.0, p / (p - 2.0))))
    throw PreconditionError("the sharpness profile needs beta > max(2, p/(p-2))");
  if (n < 1 || n > 3) throw PreconditionError("dimension must be 1-3");

  const double drift = std::pow(beta, p - 1.0) * (beta * p - beta - p + n);
  auto potential = [&](double r) {
    return std::pow(beta, p) * (beta * p - beta - p + n) / ((beta - 1.0) * p) *
           std::pow(std::fabs(r), (beta - 1.0) * p / beta);
  };
  auto potential_slope = [&](double r) {
    // F'(u) = drift |u|^{(beta p - 2 beta - p)/beta} u
    return drift * std::pow(std::fabs(r), (beta * p - 2.0 * beta - p) / beta) * r;
  };
  auto flux = [&](const SmallVec& y) {
    // |grad u|^{p-2} grad u with grad u = beta |y|^{beta-2} y
    double ay = norm(y);
    double gmag = beta * std::pow(ay, beta - 1.0);
    SmallVec out(y.n);
    double w = std::pow(gmag, p - 2.0) * beta * std::pow(ay, beta - 2.0);
    for (int a = 0; a < y.n; ++a) out[a] = w * y[a];
    return out;
  };

  CounterexampleReport rep;

  // (a) numeric divergence of the analytic flux vs the potential slope
  for (uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i);
    SmallVec x = rng.uniform(0.2, 2.0) * rng.unit_vector(n);
    double h = 1e-5 * norm(x);
    double div = 0.0;
    for (int a = 0; a < n; ++a) {
      SmallVec xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      div += (flux(xp)[a] - flux(xm)[a]) / (2.0 * h);
    }
    double expected = potential_slope(std::pow(norm(x), beta));
    double rel = std::fabs(div - expected) / std::max(std::fabs(expected), 1e-300);
    rep.max_rel_residual = std::max(rep.max_rel_residual, rel);
  }
  {
    SmallVec e1(n);
    e1[0] = 1.0;
    double h = 1e-5;
    double div = 0.0;
    for (int a = 0; a < n; ++a) {
      SmallVec xp = e1, xm = e1;
      xp[a] += h;
      xm[a] -= h;
      div += (flux(xp)[a] - flux(xm)[a]) / (2.0 * h);
    }
    rep.value_at_unit = div;
  }
  rep.pass_pde = rep.max_rel_residual <= 1e-8;

  // (b) log-log growth of |F'(r)| / r^{p-1}
  {
    double lx = 0.0, ly = 0.0, lxx = 0.0, lxy = 0.0;
    int cnt = 0;
    for (int j = 1; j <= 40; ++j) {
      double r = std::ldexp(1.0, -j);
      double h = 1e-2 * r;
      double fd = (potential(r + h) - potential(r - h)) / (2.0 * h);
      double ratio = std::fabs(fd) / std::pow(r, p - 1.0);
      double X = std::log(r), Y = std::log(ratio);
      lx += X;
      ly += Y;
      lxx += X * X;
      lxy += X * Y;
      ++cnt;
    }
    double denom = cnt * lxx - lx * lx;
    rep.slope = (cnt * lxy - lx * ly) / denom;
    rep.slope_expected = -p / beta;
    rep.pass_slope = std::fabs(rep.slope - rep.slope_expected) <= 0.05;
  }

  // (c) the potential and its slope vanish at the origin
  rep.f_origin = potential(0.0);
  rep.fprime_origin = potential_slope(std::ldexp(1.0, -40));
  rep.pass_origin = rep.f_origin == 0.0 && std::fabs(rep.fprime_origin) < 1e-6;
  return rep;
}

double gamma_sqrt_bound(const PhiModel& model, double M, Regime) {
  if (!(M > 0.0)) throw std::domain_error("gamma_sqrt_bound requires M > 0");
  const int kPts = 10000;
  double lo = 1e-8 * M * M, hi = M * M;
  double step = std::pow(hi / lo, 1.0 / (kPts - 1));
  double c = 0.0;
  for (int i = 0; i < kPts; ++i) {
    double r = std::min(lo * std::pow(step, i), hi);
    c = std::max(c, model.gamma(r) / std::sqrt(r));
  }
  return c;
}

}  // namespace modica
