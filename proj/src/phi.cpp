#include "modica/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modica {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + " is not finite");
}

double central_diff(const PhiModel::Fn& f, double r) {
  double h = 1e-5 * std::max(r, 1.0);
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

void check_against_fd(const char* name, double claimed, double fd, double scale) {
  double err = std::fabs(claimed - fd);
  if (err > 1e-5 * std::max(std::fabs(fd), scale))
    throw std::runtime_error(std::string("custom profile derivative check failed for ") + name +
                             ": claimed " + std::to_string(claimed) + ", finite difference " +
                             std::to_string(fd));
}

}  // namespace

PhiModel PhiModel::family(std::vector<PhiTerm> terms) {
  if (terms.empty()) throw PreconditionError("family requires at least one term");
  for (const auto& t : terms) {
    if (!(t.c > 0.0)) throw PreconditionError("term weight must satisfy c > 0");
    if (!(t.b >= 0.0)) throw PreconditionError("term shift must satisfy b >= 0");
    if (!(t.p >= 1.0)) throw PreconditionError("term exponent must satisfy p >= 1");
  }
  std::sort(terms.begin(), terms.end(), [](const PhiTerm& a, const PhiTerm& b) { return a.p < b.p; });
  PhiModel m;
  m.is_family_ = true;
  m.terms_ = std::move(terms);
  return m;
}

PhiModel PhiModel::custom(Fn phi, Fn phi1, Fn phi2, Fn phi3, bool check_derivatives) {
  PhiModel m;
  m.is_family_ = false;
  m.phi_ = std::move(phi);
  m.phi1_ = std::move(phi1);
  m.phi2_ = std::move(phi2);
  m.phi3_ = std::move(phi3);
  m.check_derivatives_ = check_derivatives;
  if (std::fabs(m.phi_(0.0)) > 1e-12) throw PreconditionError("custom profile must satisfy Phi(0) = 0");
  return m;
}

bool PhiModel::singular_at_zero() const {
  if (!is_family_) return true;  // unknown; treat conservatively
  for (const auto& t : terms_)
    if (t.b == 0.0 && t.p < 2.0) return true;
  return false;
}

bool PhiModel::derivatives_finite_at_zero() const {
  if (!is_family_) return false;
  for (const auto& t : terms_)
    if (!(t.b > 0.0 || t.p >= 4.0)) return false;
  return true;
}

double PhiModel::phi(double r) const {
  if (r < 0.0) throw std::domain_error("phi requires r >= 0");
  if (!is_family_) {
    double v = phi_(r);
    require_finite(v, "Phi(r)");
    return v;
  }
  double s = 0.0;
  for (const auto& t : terms_)
    s += (2.0 * t.c / t.p) * (std::pow(t.b + r, 0.5 * t.p) - std::pow(t.b, 0.5 * t.p));
  return s;
}

double PhiModel::phi_prime(double r) const {
  if (r < 0.0) throw std::domain_error("phi_prime requires r >= 0");
  if (r == 0.0 && singular_at_zero())
    throw std::domain_error("phi_prime at r = 0 is singular for this profile");
  if (!is_family_) return phi1_(r);
  double s = 0.0;
  for (const auto& t : terms_) s += t.c * std::pow(t.b + r, 0.5 * (t.p - 2.0));
  return s;
}

PhiDerivs PhiModel::derivatives(double r) const {
  if (r < 0.0) throw std::domain_error("derivatives require r > 0");
  if (r == 0.0 && !derivatives_finite_at_zero())
    throw std::domain_error("derivatives at r = 0 are singular for this profile");
  PhiDerivs d;
  if (is_family_) {
    for (const auto& t : terms_) {
      double base = t.b + r;
      d.phi1 += t.c * std::pow(base, 0.5 * (t.p - 2.0));
      double c2 = t.c * (t.p - 2.0) * 0.5;
      if (c2 != 0.0) d.phi2 += c2 * std::pow(base, 0.5 * (t.p - 4.0));
      double c3 = t.c * (t.p - 2.0) * (t.p - 4.0) * 0.25;
      if (c3 != 0.0) d.phi3 += c3 * std::pow(base, 0.5 * (t.p - 6.0));
    }
    return d;
  }
  d.phi1 = phi1_(r);
  d.phi2 = phi2_(r);
  d.phi3 = phi3_(r);
  if (check_derivatives_ && r > 0.0) {
    check_against_fd("Phi'", d.phi1, central_diff(phi_, r), std::fabs(phi_(r)));
    check_against_fd("Phi''", d.phi2, central_diff(phi1_, r), std::fabs(d.phi1));
    check_against_fd("Phi'''", d.phi3, central_diff(phi2_, r), std::fabs(d.phi2));
  }
  return d;
}

double PhiModel::lambda(double r) const {
  if (r <= 0.0) throw std::domain_error("lambda requires r > 0");
  if (is_family_) {
    double s = 0.0;
    for (const auto& t : terms_)
      s += t.c * std::pow(t.b + r, 0.5 * (t.p - 4.0)) * ((t.p - 1.0) * r + t.b);
    return s;
  }
  PhiDerivs d = derivatives(r);
  return 2.0 * r * d.phi2 + d.phi1;
}

double PhiModel::gamma(double r) const {
  if (r < 0.0) throw std::domain_error("gamma requires r >= 0");
  if (r == 0.0) return 0.0;
  if (is_family_) {
    double s = 0.0;
    for (const auto& t : terms_) {
      double base = t.b + r;
      s += 2.0 * t.c * std::pow(base, 0.5 * (t.p - 2.0)) * r -
           (2.0 * t.c / t.p) * (std::pow(base, 0.5 * t.p) - std::pow(t.b, 0.5 * t.p));
    }
    return s;
  }
  return 2.0 * phi1_(r) * r - phi_(r);
}

double lambda_grid_floor(const PhiModel& model, double r_lo, double r_hi, int points) {
  // serial on purpose: custom profiles may throw from the callable
  double floor = std::numeric_limits<double>::infinity();
  double step = std::pow(r_hi / r_lo, 1.0 / (points - 1));
  for (int i = 0; i < points; ++i) {
    double r = std::min(r_lo * std::pow(step, i), r_hi);
    floor = std::min(floor, model.lambda(r));
  }
  return floor;
}

double psi_invert(const PhiModel& model, double s, double r_max, double tol) {
  if (!(r_max > 0.0)) throw std::domain_error("psi_invert requires r_max > 0");
  if (!(tol > 0.0)) throw std::domain_error("psi_invert requires tol > 0");
  if (s < 0.0) throw std::domain_error("psi_invert requires s >= 0");

  double floor = lambda_grid_floor(model, 1e-8 * r_max, r_max, 10000);
  if (!(floor > 0.0))
    throw MonotonicityError("gamma is not strictly increasing on (0, r_max]: lambda floor = " +
                            std::to_string(floor));

  double g_max = model.gamma(r_max);
  if (s > g_max * (1.0 + 1e-12) + 1e-300)
    throw std::out_of_range("psi_invert: s exceeds gamma(r_max)");
  if (s == 0.0) return 0.0;
  if (s >= g_max) return r_max;

  double lo = 0.0, hi = r_max;
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (model.gamma(mid) < s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

CoefficientMatrix coefficient_matrix(const PhiModel& model, const SmallVec& sigma) {
  double r = norm2(sigma);
  if (r == 0.0 && !model.derivatives_finite_at_zero())
    throw std::domain_error("coefficient matrix at sigma = 0 is singular for this profile");
  PhiDerivs d = model.derivatives(r);
  int n = sigma.n;
  CoefficientMatrix out;
  out.sigma = sigma;
  out.entries = SmallMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.entries.at(i, j) = 2.0 * d.phi2 * sigma[i] * sigma[j] + (i == j ? d.phi1 : 0.0);
  return out;
}

SmallMat normalized_matrix(const PhiModel& model, const SmallVec& sigma) {
  double r = norm2(sigma);
  if (r <= 0.0) throw std::domain_error("normalized matrix requires |sigma| > 0");
  double lam = model.lambda(r);
  if (!(lam > 0.0))
    throw MonotonicityError("normalized matrix requires lambda > 0, got " + std::to_string(lam));
  CoefficientMatrix cm = coefficient_matrix(model, sigma);
  SmallMat out = cm.entries;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) /= lam;
  return out;
}

}  // namespace modica
