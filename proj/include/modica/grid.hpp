#ifndef MODICA_GRID_HPP
#define MODICA_GRID_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modica/smallvec.hpp"

namespace modica {

enum class Topology { periodic, clamped };

/// Rectangular node grid in dimension 1-3. Periodic grids place N nodes
/// per axis at origin + j*h with h = L/N (the node at L wraps to 0).
/// Clamped grids include both endpoints: h = L/(N-1), nodes 0..N-1, and
/// boundary nodes carry Dirichlet data.
class Grid {
 public:
  static Grid periodic(std::vector<int> npts, std::vector<double> length,
                       std::vector<double> origin = {});
  static Grid clamped(std::vector<int> npts, std::vector<double> length,
                      std::vector<double> origin = {});

  int dim() const { return dim_; }
  int64_t size() const { return size_; }
  Topology topology() const { return topology_; }
  bool is_periodic() const { return topology_ == Topology::periodic; }

  int npts(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double max_spacing() const;

  int64_t flat(const std::array<int, 3>& idx) const {
    int64_t f = idx[0];
    for (int a = 1; a < dim_; ++a) f = f * n_[a] + idx[a];
    return f;
  }
  std::array<int, 3> unpack(int64_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a > 0; --a) {
      idx[a] = static_cast<int>(flat % n_[a]);
      flat /= n_[a];
    }
    idx[0] = static_cast<int>(flat);
    return idx;
  }

  /// Index shifted by `shift` nodes along `axis`, wrapping on periodic
  /// grids. Clamped callers must stay in range.
  int shifted(int axis, int i, int shift) const {
    int j = i + shift;
    if (topology_ == Topology::periodic) {
      j %= n_[axis];
      if (j < 0) j += n_[axis];
    }
    return j;
  }

  double coord(int axis, int i) const { return origin_[axis] + h_[axis] * i; }
  SmallVec node_coords(const std::array<int, 3>& idx) const {
    SmallVec x(dim_);
    for (int a = 0; a < dim_; ++a) x[a] = coord(a, idx[a]);
    return x;
  }

  bool on_boundary(const std::array<int, 3>& idx) const;
  /// True if the node is at least `margin` nodes away from every clamped
  /// boundary (always true on periodic grids).
  bool interior(const std::array<int, 3>& idx, int margin) const;

  bool same_layout(const Grid& other) const;

 private:
  Grid() = default;
  int dim_ = 0;
  int64_t size_ = 0;
  Topology topology_ = Topology::periodic;
  std::array<int, 3> n_{1, 1, 1};
  std::array<double, 3> length_{0, 0, 0};
  std::array<double, 3> origin_{0, 0, 0};
  std::array<double, 3> h_{0, 0, 0};
};

class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values);
  explicit ScalarField(Grid grid, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  double operator[](int64_t i) const { return v_[i]; }
  double& operator[](int64_t i) { return v_[i]; }
  int64_t size() const { return static_cast<int64_t>(v_.size()); }

 private:
  Grid grid_;
  std::vector<double> v_;
};

/// Grid-aligned n-vectors, stored component-major.
class VectorField {
 public:
  VectorField(Grid grid, int ncomp);
  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  double at(int comp, int64_t i) const { return v_[comp * grid_.size() + i]; }
  double& at(int comp, int64_t i) { return v_[comp * grid_.size() + i]; }
  SmallVec vec_at(int64_t i) const {
    SmallVec x(ncomp_);
    for (int c = 0; c < ncomp_; ++c) x[c] = at(c, i);
    return x;
  }

 private:
  Grid grid_;
  int ncomp_;
  std::vector<double> v_;
};

/// Grid-aligned symmetric n x n matrices, stored entry-major.
class MatrixField {
 public:
  MatrixField(Grid grid, int n);
  const Grid& grid() const { return grid_; }
  int n() const { return n_; }
  double at(int i, int j, int64_t node) const { return v_[(i * n_ + j) * grid_.size() + node]; }
  double& at(int i, int j, int64_t node) { return v_[(i * n_ + j) * grid_.size() + node]; }
  SmallMat mat_at(int64_t node) const {
    SmallMat m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m.at(i, j) = at(i, j, node);
    return m;
  }

 private:
  Grid grid_;
  int n_;
  std::vector<double> v_;
};

/// Pointwise evaluation of a callable at node coordinates; throws (naming
/// the node) if a sample is not finite.
ScalarField sample_field(const std::function<double(const SmallVec&)>& expr, const Grid& grid);

// Binary field format: all header words little-endian 64-bit.
//   u64 dim | u64 N[dim] | f64 L[dim] | f64 origin[dim] | u64 topology (0 =
//   periodic, 1 = clamped) | f64 payload, row major.
void write_field(const std::string& path, const ScalarField& field);
ScalarField read_field(const std::string& path);

/// CSV export: node index, coordinates, value.
void write_field_csv(const std::string& path, const ScalarField& field);

}  // namespace modica

#endif
