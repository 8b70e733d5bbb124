#ifndef MODICA_SMALLVEC_HPP
#define MODICA_SMALLVEC_HPP

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace modica {

/// Fixed-capacity vector for spatial points (n <= 3) and source states
/// (up to n+1 components).
struct SmallVec {
  static constexpr int cap = 4;
  int n = 0;
  std::array<double, cap> v{};

  SmallVec() = default;
  explicit SmallVec(int size, double fill = 0.0) : n(size) {
    assert(size >= 0 && size <= cap);
    v.fill(0.0);
    for (int i = 0; i < n; ++i) v[i] = fill;
  }
  SmallVec(std::initializer_list<double> init) : n(static_cast<int>(init.size())) {
    assert(n <= cap);
    int i = 0;
    for (double x : init) v[i++] = x;
  }

  double& operator[](int i) { assert(i >= 0 && i < n); return v[i]; }
  double operator[](int i) const { assert(i >= 0 && i < n); return v[i]; }
  int size() const { return n; }
};

inline double dot(const SmallVec& a, const SmallVec& b) {
  assert(a.n == b.n);
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.v[i] * b.v[i];
  return s;
}

inline double norm2(const SmallVec& a) { return dot(a, a); }
inline double norm(const SmallVec& a) { return std::sqrt(norm2(a)); }

inline SmallVec operator*(double s, const SmallVec& a) {
  SmallVec r(a.n);
  for (int i = 0; i < a.n; ++i) r.v[i] = s * a.v[i];
  return r;
}

inline SmallVec operator+(const SmallVec& a, const SmallVec& b) {
  assert(a.n == b.n);
  SmallVec r(a.n);
  for (int i = 0; i < a.n; ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

/// Row-major matrix with up to 4 rows and 3 columns. Covers the n x n
/// coefficient matrices and the (n+1) x n operator derivative tables.
struct SmallMat {
  static constexpr int rcap = 4;
  static constexpr int ccap = 3;
  int rows = 0;
  int cols = 0;
  std::array<double, rcap * ccap> a{};

  SmallMat() = default;
  SmallMat(int r, int c) : rows(r), cols(c) {
    assert(r >= 0 && r <= rcap && c >= 0 && c <= ccap);
    a.fill(0.0);
  }

  double& at(int i, int j) {
    assert(i >= 0 && i < rows && j >= 0 && j < cols);
    return a[i * ccap + j];
  }
  double at(int i, int j) const {
    assert(i >= 0 && i < rows && j >= 0 && j < cols);
    return a[i * ccap + j];
  }
};

/// xi^T A xi for square A.
inline double quadratic_form(const SmallMat& m, const SmallVec& xi) {
  assert(m.rows == m.cols && m.rows == xi.n);
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * xi.v[i] * xi.v[j];
  return s;
}

}  // namespace modica

#endif
