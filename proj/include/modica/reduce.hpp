#ifndef MODICA_REDUCE_HPP
#define MODICA_REDUCE_HPP

#include <cstdint>
#include <vector>

namespace modica {

/// Deterministic sums and dot products: values are accumulated per
/// fixed-size block and the block partials are combined pairwise, so the
/// result is identical for any thread count.
double det_sum(const double* x, int64_t n);
double det_dot(const double* a, const double* b, int64_t n);
double det_sum(const std::vector<double>& x);
double det_dot(const std::vector<double>& a, const std::vector<double>& b);

double max_abs(const double* x, int64_t n);
double max_abs(const std::vector<double>& x);

}  // namespace modica

#endif
