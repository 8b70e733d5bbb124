// Timing comparison of the OpenMP kernels against their serial references.
// Also asserts the outputs agree bit for bit.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "modica/ellipticity.hpp"
#include "modica/field_ops.hpp"

using namespace modica;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = Clock::now();
    fn();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

double diff_fields(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-18s %10.2f ms %10.2f ms %8.2fx %12.3g\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
  if (const char* threads = std::getenv("MODICA_THREADS")) {
#ifdef _OPENMP
    int t = std::atoi(threads);
    if (t > 0) omp_set_num_threads(t);
#endif
  }
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#endif
  std::printf("%-18s %13s %13s %9s %12s\n", "kernel", "serial", "parallel", "speedup", "max diff");

  Grid grid = Grid::periodic({768, 768}, {6.283185307179586, 6.283185307179586});
  ScalarField u = sample_field(
      [](const SmallVec& x) { return std::sin(x[0]) * std::cos(2.0 * x[1]) + 0.3 * std::sin(3.0 * x[0]); },
      grid);
  PhiModel plap = PhiModel::family({{1.0, 0.0, 4.0}});

  {
    VectorField gs = serial::gradient_of(u);
    VectorField gp = gradient_of(u);
    double d = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
      for (int64_t i = 0; i < grid.size(); ++i) d = std::max(d, std::fabs(gs.at(a, i) - gp.at(a, i)));
    double ts = time_best_of([&] { serial::gradient_of(u); });
    double tp = time_best_of([&] { gradient_of(u); });
    report("gradient", ts, tp, d);
  }
  {
    MatrixField hs = serial::hessian_of(u);
    MatrixField hp = hessian_of(u);
    double d = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
      for (int b = 0; b < grid.dim(); ++b)
        for (int64_t i = 0; i < grid.size(); ++i)
          d = std::max(d, std::fabs(hs.at(a, b, i) - hp.at(a, b, i)));
    double ts = time_best_of([&] { serial::hessian_of(u); });
    double tp = time_best_of([&] { hessian_of(u); });
    report("hessian", ts, tp, d);
  }
  {
    ScalarField fs = serial::flux_divergence(plap, u);
    ScalarField fp = flux_divergence(plap, u);
    double d = diff_fields(fs.values(), fp.values());
    double ts = time_best_of([&] { serial::flux_divergence(plap, u); });
    double tp = time_best_of([&] { flux_divergence(plap, u); });
    report("flux divergence", ts, tp, d);
  }
  {
    PhiModel fam = PhiModel::family({{1.0, 1.0, 3.0}, {0.5, 2.0, 4.0}});
    EllipticityCertificate cert = constants_assumption_a(fam, 0.5, 2.0);
    const uint64_t samples = 2000000;
    EllipticityCertificate cs = serial::verify_bounds(fam, cert, 3, samples, 7);
    EllipticityCertificate cp = verify_bounds(fam, cert, 3, samples, 7);
    double d = cs.violation_count == cp.violation_count ? 0.0 : 1.0;
    double ts = time_best_of([&] { serial::verify_bounds(fam, cert, 3, samples, 7); }, 2);
    double tp = time_best_of([&] { verify_bounds(fam, cert, 3, samples, 7); }, 2);
    report("envelope sampler", ts, tp, d);
  }
  return 0;
}
