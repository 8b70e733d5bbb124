#ifndef MODICA_ELLIPTICITY_HPP
#define MODICA_ELLIPTICITY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modica/phi.hpp"
#include "modica/smallvec.hpp"

namespace modica {

/// Ellipticity envelope type. A: power envelope (a + |sigma|)^{p-2} on the
/// profile slope and the quadratic form. B: mean-curvature envelope
/// (1 + |sigma|)^{-1}, tested against the lifted direction
/// xi' = (xi, sigma . xi).
enum class Regime { A, B };

struct Violation {
  uint64_t sample = 0;
  SmallVec sigma;
  SmallVec xi;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct EllipticityCertificate {
  Regime regime = Regime::A;
  double p = 2.0;   // envelope exponent (regime A)
  double a = 0.0;   // envelope shift, sqrt(b_1) for families (regime A)
  double M = 1.0;   // gradient cap
  double mu = 0.5;  // shift-ratio parameter in (0, 1)
  double c1_phi = 0.0, c2_phi = 0.0;    // profile slope envelope
  double c1_form = 0.0, c2_form = 0.0;  // quadratic form envelope
  uint64_t samples = 0;
  uint64_t seed = 0;
  uint64_t violation_count = 0;
  std::vector<Violation> violations;  // capped witness list
  std::string notes;

  /// Flat key-value record for CLI output.
  std::vector<std::pair<std::string, std::string>> record() const;
};

/// Power-envelope constants for a sum-of-powers family. Requires p_1 > 1,
/// b_1 >= 0 with mu b_1 <= b_k <= b_1/mu, mu in (0,1), M >= 1.
EllipticityCertificate constants_assumption_a(const PhiModel& family, double mu, double M);

/// Mean-curvature-envelope constants. Requires mu <= b_k <= 1/mu, M >= 1.
EllipticityCertificate constants_assumption_b(const PhiModel& family, double mu, double M);

/// Monte-Carlo check of the envelope inequalities on sampled (sigma, xi):
/// direction uniform on the sphere, radius uniform in (1e-6, M), xi on the
/// unit sphere. Inequalities are enforced up to relative slack 1e-9;
/// failures are recorded as witnesses, never thrown. Results are
/// reproducible for a given seed regardless of thread count.
EllipticityCertificate verify_bounds(const PhiModel& model, EllipticityCertificate cert, int n,
                                     uint64_t samples, uint64_t seed);

/// Minimum of lambda over a 1e4-point log grid on [1e-8 M^2, M^2]; a
/// positive value certifies the radial ellipticity needed by psi_invert
/// and the normalized matrix on the working range.
double lambda_floor(const PhiModel& model, double M);

namespace serial {
/// Plain-loop reference used by tests and the kernel benchmark.
EllipticityCertificate verify_bounds(const PhiModel& model, EllipticityCertificate cert, int n,
                                     uint64_t samples, uint64_t seed);
}  // namespace serial

}  // namespace modica

#endif
