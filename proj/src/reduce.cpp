#include "modica/reduce.hpp"

#include <cmath>

namespace modica {

namespace {

constexpr int64_t kBlock = 4096;

double pairwise(const double* x, int64_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  int64_t half = n / 2;
  return pairwise(x, half) + pairwise(x + half, n - half);
}

}  // namespace

double det_sum(const double* x, int64_t n) {
  if (n == 0) return 0.0;
  int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < nb; ++b) {
    int64_t lo = b * kBlock;
    int64_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (int64_t i = lo; i < hi; ++i) s += x[i];
    partial[b] = s;
  }
  return pairwise(partial.data(), nb);
}

double det_dot(const double* a, const double* b, int64_t n) {
  if (n == 0) return 0.0;
  int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (int64_t blk = 0; blk < nb; ++blk) {
    int64_t lo = blk * kBlock;
    int64_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (int64_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[blk] = s;
  }
  return pairwise(partial.data(), nb);
}

double det_sum(const std::vector<double>& x) { return det_sum(x.data(), static_cast<int64_t>(x.size())); }

double det_dot(const std::vector<double>& a, const std::vector<double>& b) {
  return det_dot(a.data(), b.data(), static_cast<int64_t>(a.size()));
}

double max_abs(const double* x, int64_t n) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double max_abs(const std::vector<double>& x) { return max_abs(x.data(), static_cast<int64_t>(x.size())); }

}  // namespace modica
