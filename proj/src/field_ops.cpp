#include "modica/field_ops.hpp"

#include <cmath>

namespace modica {

namespace {

// First derivative along `axis` at node idx; second order everywhere.
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

// Second derivative along `axis`; 3-point interior, 4-point one-sided at
// clamped boundaries (exact for quadratics).
double node_d2(const Grid& g, const std::vector<double>& v, std::array<int, 3> idx, int axis) {
  double h = g.spacing(axis);
  int i = idx[axis];
  int n = g.npts(axis);
  if (g.is_periodic() || (i > 0 && i < n - 1)) {
    auto ip = idx, im = idx;
    ip[axis] = g.shifted(axis, i, +1);
    im[axis] = g.shifted(axis, i, -1);
    return (v[g.flat(ip)] - 2.0 * v[g.flat(idx)] + v[g.flat(im)]) / (h * h);
  }
  int dir = i == 0 ? 1 : -1;
  auto i1 = idx, i2 = idx, i3 = idx;
  i1[axis] = i + dir;
  i2[axis] = i + 2 * dir;
  i3[axis] = i + 3 * dir;
  return (2.0 * v[g.flat(idx)] - 5.0 * v[g.flat(i1)] + 4.0 * v[g.flat(i2)] - v[g.flat(i3)]) /
         (h * h);
}

// Flux through the face between `base` and `base + e_axis`.
double face_flux(const PhiModel& model, const Grid& g, const std::vector<double>& v,
                 std::array<int, 3> base, int axis, bool regularize) {
  auto up = base;
  up[axis] = g.shifted(axis, base[axis], +1);
  double normal = (v[g.flat(up)] - v[g.flat(base)]) / g.spacing(axis);
  double r = normal * normal;
  for (int t = 0; t < g.dim(); ++t) {
    if (t == axis) continue;
    double tang = 0.5 * (node_d1(g, v, base, t) + node_d1(g, v, up, t));
    r += tang * tang;
  }
  if (regularize) r = std::max(r, 1e-12);
  return model.phi_prime(r) * normal;
}

double node_flux_divergence(const PhiModel& model, const Grid& g, const std::vector<double>& v,
                            std::array<int, 3> idx, bool regularize) {
  double div = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    auto minus = idx;
    minus[a] = g.shifted(a, idx[a], -1);
    double fp = face_flux(model, g, v, idx, a, regularize);
    double fm = face_flux(model, g, v, minus, a, regularize);
    div += (fp - fm) / g.spacing(a);
  }
  return div;
}

}  // namespace

VectorField gradient_of(const ScalarField& field) {
  const Grid& g = field.grid();
  VectorField out(g, g.dim());
  for (int a = 0; a < g.dim(); ++a) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < g.size(); ++i) out.at(a, i) = node_d1(g, field.values(), g.unpack(i), a);
  }
  return out;
}

MatrixField hessian_of(const ScalarField& field) {
  const Grid& g = field.grid();
  MatrixField out(g, g.dim());
  for (int a = 0; a < g.dim(); ++a) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < g.size(); ++i)
      out.at(a, a, i) = node_d2(g, field.values(), g.unpack(i), a);
  }
  std::vector<double> tmp(static_cast<size_t>(g.size()));
  for (int b = 0; b < g.dim(); ++b) {
    for (int a = 0; a < b; ++a) {
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < g.size(); ++i) tmp[i] = node_d1(g, field.values(), g.unpack(i), b);
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < g.size(); ++i) {
        double cross = node_d1(g, tmp, g.unpack(i), a);
        out.at(a, b, i) = cross;
        out.at(b, a, i) = cross;
      }
    }
  }
  return out;
}

ScalarField flux_divergence(const PhiModel& model, const ScalarField& field) {
  const Grid& g = field.grid();
  bool reg = model.singular_at_zero();
  ScalarField out(g, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < g.size(); ++i) {
    auto idx = g.unpack(i);
    if (g.on_boundary(idx)) continue;
    out[i] = node_flux_divergence(model, g, field.values(), idx, reg);
  }
  return out;
}

namespace serial {

VectorField gradient_of(const ScalarField& field) {
  const Grid& g = field.grid();
  VectorField out(g, g.dim());
  for (int a = 0; a < g.dim(); ++a)
    for (int64_t i = 0; i < g.size(); ++i) out.at(a, i) = node_d1(g, field.values(), g.unpack(i), a);
  return out;
}

MatrixField hessian_of(const ScalarField& field) {
  const Grid& g = field.grid();
  MatrixField out(g, g.dim());
  for (int a = 0; a < g.dim(); ++a)
    for (int64_t i = 0; i < g.size(); ++i)
      out.at(a, a, i) = node_d2(g, field.values(), g.unpack(i), a);
  std::vector<double> tmp(static_cast<size_t>(g.size()));
  for (int b = 0; b < g.dim(); ++b) {
    for (int a = 0; a < b; ++a) {
      for (int64_t i = 0; i < g.size(); ++i) tmp[i] = node_d1(g, field.values(), g.unpack(i), b);
      for (int64_t i = 0; i < g.size(); ++i) {
        double cross = node_d1(g, tmp, g.unpack(i), a);
        out.at(a, b, i) = cross;
        out.at(b, a, i) = cross;
      }
    }
  }
  return out;
}

ScalarField flux_divergence(const PhiModel& model, const ScalarField& field) {
  const Grid& g = field.grid();
  bool reg = model.singular_at_zero();
  ScalarField out(g, 0.0);
  for (int64_t i = 0; i < g.size(); ++i) {
    auto idx = g.unpack(i);
    if (g.on_boundary(idx)) continue;
    out[i] = node_flux_divergence(model, g, field.values(), idx, reg);
  }
  return out;
}

}  // namespace serial

}  // namespace modica
