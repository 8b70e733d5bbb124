#include "modica/ellipticity.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "modica/report.hpp"
#include "modica/rng.hpp"

namespace modica {

namespace {

constexpr double kSlack = 1e-9;        // absorbs rounding in proven inequalities
constexpr uint64_t kWitnessCap = 16;

bool holds_le(double lhs, double rhs) {
  return lhs - rhs <= kSlack * std::max(std::fabs(lhs), std::fabs(rhs));
}

void require_family(const PhiModel& model, const char* who) {
  if (!model.is_family())
    throw PreconditionError(std::string(who) + " requires a sum-of-powers family");
}

void require_mu_m(double mu, double M) {
  if (!(mu > 0.0 && mu < 1.0))
    throw PreconditionError("mu must lie in (0, 1), got " + std::to_string(mu));
  if (!(M >= 1.0)) throw PreconditionError("M >= 1 is required, got " + std::to_string(M));
}

struct SampleChecks {
  // evaluates the certificate inequalities at one (sigma, xi) draw
  static void run(const PhiModel& model, const EllipticityCertificate& cert, int n, uint64_t i,
                  uint64_t seed, uint64_t& count, std::vector<Violation>& witnesses) {
    Rng rng = Rng::stream(seed, i);
    SmallVec dir = rng.unit_vector(n);
    double radius = rng.uniform(1e-6, cert.M);
    SmallVec sigma = radius * dir;
    SmallVec xi = rng.unit_vector(n);

    double r = norm2(sigma);
    double phi1 = model.derivatives(r).phi1;
    double form = quadratic_form(coefficient_matrix(model, sigma).entries, xi);

    auto fail = [&](const char* name, double lhs, double rhs) {
      ++count;
      if (witnesses.size() < kWitnessCap) witnesses.push_back({i, sigma, xi, name, lhs, rhs});
    };

    if (cert.regime == Regime::A) {
      double env = std::pow(cert.a + radius, cert.p - 2.0);
      if (!holds_le(cert.c1_phi * env, phi1)) fail("phi_lower", cert.c1_phi * env, phi1);
      if (!holds_le(phi1, cert.c2_phi * env)) fail("phi_upper", phi1, cert.c2_phi * env);
      if (!holds_le(cert.c1_form * env, form)) fail("form_lower", cert.c1_form * env, form);
      if (!holds_le(form, cert.c2_form * env)) fail("form_upper", form, cert.c2_form * env);
    } else {
      double env = 1.0 / (1.0 + radius);
      // lifted direction xi' = (xi, sigma . xi), orthogonal to (-sigma, 1)
      double xi_ext2 = 1.0 + dot(sigma, xi) * dot(sigma, xi);
      if (!holds_le(cert.c1_phi * env, phi1)) fail("phi_lower", cert.c1_phi * env, phi1);
      if (!holds_le(phi1, cert.c2_phi * env)) fail("phi_upper", phi1, cert.c2_phi * env);
      if (!holds_le(cert.c1_form * env * xi_ext2, form))
        fail("form_lower", cert.c1_form * env * xi_ext2, form);
      if (!holds_le(form, cert.c2_form * env * xi_ext2))
        fail("form_upper", form, cert.c2_form * env * xi_ext2);
    }
  }
};

}  // namespace

std::vector<std::pair<std::string, std::string>> EllipticityCertificate::record() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("regime", regime == Regime::A ? "A" : "B");
  kv.emplace_back("p", format_g17(p));
  kv.emplace_back("a", format_g17(a));
  kv.emplace_back("M", format_g17(M));
  kv.emplace_back("mu", format_g17(mu));
  kv.emplace_back("c1_phi", format_g17(c1_phi));
  kv.emplace_back("c2_phi", format_g17(c2_phi));
  kv.emplace_back("c1_form", format_g17(c1_form));
  kv.emplace_back("c2_form", format_g17(c2_form));
  kv.emplace_back("samples", std::to_string(samples));
  kv.emplace_back("violations", std::to_string(violation_count));
  kv.emplace_back("seed", std::to_string(seed));
  if (!notes.empty()) kv.emplace_back("notes", notes);
  return kv;
}

EllipticityCertificate constants_assumption_a(const PhiModel& family, double mu, double M) {
  require_family(family, "constants_assumption_a");
  require_mu_m(mu, M);
  const auto& t = family.terms();
  double p1 = t.front().p;
  double pm = t.back().p;
  double b1 = t.front().b;
  double c1 = t.front().c;
  if (!(p1 > 1.0))
    throw PreconditionError("p_1 > 1 is required, got p_1 = " + std::to_string(p1));
  for (const auto& term : t) {
    if (!(mu * b1 <= term.b && term.b <= b1 / mu))
      throw PreconditionError("mu*b_1 <= b_k <= b_1/mu is required, violated by b_k = " +
                              std::to_string(term.b));
  }

  double q = 0.5 * std::fabs(p1 - 2.0);
  double tail = 0.0;
  for (const auto& term : t) tail += term.c * std::pow(b1 / mu + M * M, 0.5 * (term.p - p1));

  EllipticityCertificate cert;
  cert.regime = Regime::A;
  cert.p = p1;
  cert.a = std::sqrt(b1);
  cert.M = M;
  cert.mu = mu;
  cert.c1_phi = c1 * std::pow(0.5, q);
  cert.c2_phi = std::pow(2.0 / mu, q) * tail;
  cert.c1_form = c1 * std::min(1.0, p1 - 1.0) * std::pow(0.5 * mu, q);
  cert.c2_form = std::pow(2.0 / mu, q) * (pm + 1.0) * tail;
  return cert;
}

EllipticityCertificate constants_assumption_b(const PhiModel& family, double mu, double M) {
  require_family(family, "constants_assumption_b");
  require_mu_m(mu, M);
  const auto& t = family.terms();
  double p1 = t.front().p;
  double c1 = t.front().c;
  for (const auto& term : t) {
    if (!(mu <= term.b && term.b <= 1.0 / mu))
      throw PreconditionError("mu <= b_k <= 1/mu is required, violated by b_k = " +
                              std::to_string(term.b));
  }

  double tail_phi = 0.0, tail_form = 0.0;
  for (const auto& term : t) {
    double f = term.c * std::pow(1.0 / mu + M * M, 0.5 * (term.p - 1.0));
    tail_phi += f;
    tail_form += (std::fabs(term.p - 2.0) + 1.0) * f;
  }

  EllipticityCertificate cert;
  cert.regime = Regime::B;
  cert.p = 2.0;  // the mean-curvature envelope reduces to the power case with p = 2
  cert.a = 0.0;
  cert.M = M;
  cert.mu = mu;
  cert.c1_phi = c1 * std::pow(mu, 0.5 * p1);
  cert.c2_phi = std::sqrt(2.0 / mu) * tail_phi;
  cert.c1_form = c1 * std::min(1.0, p1 - 1.0) * std::pow(mu, 0.5 * p1) / (1.0 + M * M);
  cert.c2_form = std::sqrt(2.0 / mu) * tail_form;
  if (p1 == 1.0) cert.notes = "degenerate lower form constant: p_1 = 1 makes c1_form vanish";
  return cert;
}

EllipticityCertificate verify_bounds(const PhiModel& model, EllipticityCertificate cert, int n,
                                     uint64_t samples, uint64_t seed) {
  cert.samples = samples;
  cert.seed = seed;
  cert.violation_count = 0;
  cert.violations.clear();

  int nthreads = 1;
#ifdef _OPENMP
#pragma omp parallel
  {
#pragma omp single
    nthreads = omp_get_num_threads();
  }
#endif
  std::vector<uint64_t> counts(nthreads, 0);
  std::vector<std::vector<Violation>> buckets(nthreads);

#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(samples); ++i) {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    SampleChecks::run(model, cert, n, static_cast<uint64_t>(i), seed, counts[tid], buckets[tid]);
  }

  std::vector<Violation> merged;
  for (int t = 0; t < nthreads; ++t) {
    cert.violation_count += counts[t];
    merged.insert(merged.end(), buckets[t].begin(), buckets[t].end());
  }
  std::sort(merged.begin(), merged.end(),
            [](const Violation& a, const Violation& b) { return a.sample < b.sample; });
  if (merged.size() > kWitnessCap) merged.resize(kWitnessCap);
  cert.violations = std::move(merged);
  return cert;
}

double lambda_floor(const PhiModel& model, double M) {
  if (!(M > 0.0)) throw std::domain_error("lambda_floor requires M > 0");
  return lambda_grid_floor(model, 1e-8 * M * M, M * M, 10000);
}

namespace serial {

EllipticityCertificate verify_bounds(const PhiModel& model, EllipticityCertificate cert, int n,
                                     uint64_t samples, uint64_t seed) {
  cert.samples = samples;
  cert.seed = seed;
  cert.violation_count = 0;
  cert.violations.clear();
  std::vector<Violation> witnesses;
  for (uint64_t i = 0; i < samples; ++i)
    SampleChecks::run(model, cert, n, i, seed, cert.violation_count, witnesses);
  if (witnesses.size() > kWitnessCap) witnesses.resize(kWitnessCap);
  cert.violations = std::move(witnesses);
  return cert;
}

}  // namespace serial

}  // namespace modica
