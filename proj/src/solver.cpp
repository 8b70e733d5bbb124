#include "modica/solver.hpp"

#include <algorithm>
#include <cmath>

#include "modica/reduce.hpp"

namespace modica {

namespace {

// Residual stencil footprint: the 3^d box of offsets around a node.
std::vector<std::array<int, 3>> box_offsets(int dim) {
  std::vector<std::array<int, 3>> offs;
  int lo1 = dim > 1 ? -1 : 0, hi1 = dim > 1 ? 1 : 0;
  int lo2 = dim > 2 ? -1 : 0, hi2 = dim > 2 ? 1 : 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = lo1; b <= hi1; ++b)
      for (int c = lo2; c <= hi2; ++c) offs.push_back({a, b, c});
  return offs;
}

// Sparse Jacobian with one fixed offset list per row.
struct StencilJacobian {
  const Grid* grid = nullptr;
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> coeff;  // size() * offsets.size(), row major
  std::vector<char> fixed;    // Dirichlet rows

  int64_t cols() const { return grid->size(); }

  bool neighbor(int64_t row, const std::array<int, 3>& off, int64_t& col) const {
    auto idx = grid->unpack(row);
    for (int a = 0; a < grid->dim(); ++a) {
      int j = idx[a] + off[a];
      if (grid->is_periodic()) {
        j %= grid->npts(a);
        if (j < 0) j += grid->npts(a);
      } else if (j < 0 || j >= grid->npts(a)) {
        return false;
      }
      idx[a] = j;
    }
    col = grid->flat(idx);
    return true;
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    int64_t nrows = grid->size();
    size_t noff = offsets.size();
#pragma omp parallel for schedule(static)
    for (int64_t row = 0; row < nrows; ++row) {
      if (fixed[row]) {
        y[row] = x[row];
        continue;
      }
      double s = 0.0;
      for (size_t o = 0; o < noff; ++o) {
        double c = coeff[row * noff + o];
        if (c == 0.0) continue;
        int64_t col;
        if (neighbor(row, offsets[o], col)) s += c * x[col];
      }
      y[row] = s;
    }
  }

  std::vector<double> diagonal() const {
    size_t noff = offsets.size();
    size_t center = 0;
    for (size_t o = 0; o < noff; ++o)
      if (offsets[o][0] == 0 && offsets[o][1] == 0 && offsets[o][2] == 0) center = o;
    std::vector<double> d(grid->size());
#pragma omp parallel for schedule(static)
    for (int64_t row = 0; row < grid->size(); ++row)
      d[row] = fixed[row] ? 1.0 : coeff[row * noff + center];
    return d;
  }
};

std::vector<double> eval_residual(const PhiModel& model, const SourceModel& src,
                                  const SOperator& s, const Grid& grid,
                                  const std::vector<double>& u) {
  ScalarField f(grid, u);
  ScalarField div = flux_divergence(model, f);
  VectorField grad = gradient_of(f);
  std::vector<double> r(u.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unpack(i);
    if (grid.on_boundary(idx)) continue;
    SmallVec g = grad.vec_at(i);
    auto se = s.eval(u[i], g, grid.node_coords(idx));
    r[i] = div[i] - src.f(u[i]) - src.g(g, se.value).g;
  }
  return r;
}

// Frozen-slope residual used by the picard Jacobian: face weights
// Phi'(|grad u|^2) are taken from the reference iterate.
std::vector<double> eval_residual_frozen(const PhiModel& model, const SourceModel& src,
                                         const SOperator& s, const Grid& grid,
                                         const std::vector<double>& u_ref,
                                         const std::vector<double>& u) {
  // weights from the reference solution's gradient magnitude at nodes
  ScalarField ref(grid, u_ref);
  VectorField gref = gradient_of(ref);
  bool reg = model.singular_at_zero();
  std::vector<double> w(u.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < grid.size(); ++i) {
    double r = norm2(gref.vec_at(i));
    if (reg) r = std::max(r, 1e-12);
    w[i] = model.phi_prime(r);
  }
  ScalarField f(grid, u);
  VectorField grad = gradient_of(f);
  std::vector<double> out(u.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unpack(i);
    if (grid.on_boundary(idx)) continue;
    double div = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      auto up = idx, dn = idx;
      up[a] = grid.shifted(a, idx[a], +1);
      dn[a] = grid.shifted(a, idx[a], -1);
      double h = grid.spacing(a);
      int64_t iu = grid.flat(up), id = grid.flat(dn);
      double wp = 0.5 * (w[i] + w[iu]);
      double wm = 0.5 * (w[i] + w[id]);
      div += (wp * (u[iu] - u[i]) - wm * (u[i] - u[id])) / (h * h);
    }
    SmallVec g = grad.vec_at(i);
    auto se = s.eval(u[i], g, grid.node_coords(idx));
    out[i] = div - src.f(u[i]) - src.g(g, se.value).g;
  }
  return out;
}

// Forward-difference Jacobian by node coloring: nodes with equal
// (i mod 3, j mod 3, k mod 3) are perturbed together; the residual stencil
// never spans two nodes of one color.
StencilJacobian colored_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& residual,
    const Grid& grid, const std::vector<double>& u, const std::vector<double>& r0) {
  StencilJacobian jac;
  jac.grid = &grid;
  jac.offsets = box_offsets(grid.dim());
  size_t noff = jac.offsets.size();
  jac.coeff.assign(static_cast<size_t>(grid.size()) * noff, 0.0);
  jac.fixed.assign(static_cast<size_t>(grid.size()), 0);
  for (int64_t i = 0; i < grid.size(); ++i)
    if (grid.on_boundary(grid.unpack(i))) jac.fixed[i] = 1;

  int ncolors = 1;
  for (int a = 0; a < grid.dim(); ++a) ncolors *= 3;
  auto color_of = [&](const std::array<int, 3>& idx) {
    int c = 0;
    for (int a = 0; a < grid.dim(); ++a) c = c * 3 + idx[a] % 3;
    return c;
  };

  const double eps_base = std::sqrt(std::numeric_limits<double>::epsilon());
  std::vector<double> up = u;
  std::vector<double> eps(static_cast<size_t>(grid.size()), 0.0);
  for (int color = 0; color < ncolors; ++color) {
    bool any = false;
    for (int64_t i = 0; i < grid.size(); ++i) {
      auto idx = grid.unpack(i);
      if (color_of(idx) != color || jac.fixed[i]) continue;
      eps[i] = eps_base * std::max(1.0, std::fabs(u[i]));
      up[i] = u[i] + eps[i];
      any = true;
    }
    if (!any) continue;
    std::vector<double> rp = residual(up);
    // scatter: each perturbed column contributes to the rows in its box
#pragma omp parallel for schedule(static)
    for (int64_t row = 0; row < grid.size(); ++row) {
      if (jac.fixed[row]) continue;
      for (size_t o = 0; o < noff; ++o) {
        int64_t col;
        if (!jac.neighbor(row, jac.offsets[o], col)) continue;
        auto cidx = grid.unpack(col);
        if (color_of(cidx) != color || jac.fixed[col]) continue;
        jac.coeff[row * noff + o] = (rp[row] - r0[row]) / eps[col];
      }
    }
    for (int64_t i = 0; i < grid.size(); ++i) {
      if (eps[i] != 0.0) {
        up[i] = u[i];
        eps[i] = 0.0;
      }
    }
  }
  return jac;
}

// BiCGStab with Jacobi preconditioning; reductions use the deterministic
// blocked dot so reruns match across thread counts.
bool bicgstab(const StencilJacobian& A, const std::vector<double>& b, std::vector<double>& x,
              double rel_tol, int max_iters) {
  int64_t n = static_cast<int64_t>(b.size());
  std::vector<double> d = A.diagonal();
  for (auto& v : d) v = std::fabs(v) > 1e-300 ? 1.0 / v : 1.0;

  std::vector<double> r(b), r0(n), p(n, 0.0), v(n, 0.0), sv(n), t(n), phat(n), shat(n);
  x.assign(n, 0.0);
  r0 = r;
  double bnorm = std::sqrt(det_dot(b, b));
  if (bnorm == 0.0) return true;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rnorm = bnorm;
  for (int it = 0; it < max_iters; ++it) {
    double rho1 = det_dot(r0, r);
    if (std::fabs(rho1) < 1e-300) break;
    if (it == 0) {
      p = r;
    } else {
      double beta = (rho1 / rho) * (alpha / omega);
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    rho = rho1;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) phat[i] = d[i] * p[i];
    A.apply(phat, v);
    double r0v = det_dot(r0, v);
    if (std::fabs(r0v) < 1e-300) break;
    alpha = rho / r0v;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) sv[i] = r[i] - alpha * v[i];
    double snorm = std::sqrt(det_dot(sv, sv));
    if (snorm <= rel_tol * bnorm) {
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      return true;
    }
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) shat[i] = d[i] * sv[i];
    A.apply(shat, t);
    double tt = det_dot(t, t);
    if (tt < 1e-300) break;
    omega = det_dot(t, sv) / tt;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = sv[i] - omega * t[i];
    }
    rnorm = std::sqrt(det_dot(r, r));
    if (rnorm <= rel_tol * bnorm) return true;
    if (std::fabs(omega) < 1e-300) break;
  }
  return rnorm <= rel_tol * bnorm;
}

}  // namespace

ScalarField residual_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                           const ScalarField& field) {
  std::vector<double> r = eval_residual(model, src, s, field.grid(), field.values());
  return ScalarField(field.grid(), std::move(r));
}

SolveOutcome solve_newton(const PhiModel& model, const SourceModel& src, const SOperator& s,
                          const ScalarField& seed_field, const SolveParams& params) {
  const Grid& grid = seed_field.grid();
  if (params.max_iters < 1 || !(params.tol > 0.0))
    throw PreconditionError("solver parameters require max_iters >= 1 and tol > 0");
  if (!(params.damping > 0.0 && params.damping <= 1.0))
    throw PreconditionError("damping must lie in (0, 1]");

  std::vector<double> u = seed_field.values();
  auto full_residual = [&](const std::vector<double>& w) {
    return eval_residual(model, src, s, grid, w);
  };

  SolveOutcome out{ScalarField(grid, u), 0.0, 0, false, {}};
  std::vector<double> r = full_residual(u);
  double rnorm = max_abs(r);
  out.history.push_back(rnorm);

  for (int iter = 0; iter < params.max_iters && rnorm > params.tol; ++iter) {
    std::function<std::vector<double>(const std::vector<double>&)> jac_residual;
    if (params.jacobian == JacobianMode::numeric_colored) {
      jac_residual = full_residual;
    } else {
      const std::vector<double>& u_ref = u;
      jac_residual = [&, u_ref](const std::vector<double>& w) {
        return eval_residual_frozen(model, src, s, grid, u_ref, w);
      };
    }
    std::vector<double> r_for_jac =
        params.jacobian == JacobianMode::numeric_colored ? r : jac_residual(u);
    StencilJacobian jac = colored_jacobian(jac_residual, grid, u, r_for_jac);

    std::vector<double> rhs(r.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(r.size()); ++i) rhs[i] = -r[i];

    double forcing = std::min(0.1, std::sqrt(rnorm));
    std::vector<double> step;
    bicgstab(jac, rhs, step, forcing, params.linear_max_iters);

    // backtracking on the residual sup-norm
    double lambda = params.damping;
    bool accepted = false;
    std::vector<double> trial(u.size());
    for (int h = 0; h <= params.max_halvings; ++h) {
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < static_cast<int64_t>(u.size()); ++i)
        trial[i] = u[i] + lambda * step[i];
      std::vector<double> rt = full_residual(trial);
      double tnorm = max_abs(rt);
      if (tnorm < rnorm) {
        u.swap(trial);
        r.swap(rt);
        rnorm = tnorm;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    out.iterations = iter + 1;
    if (!accepted) break;  // stagnation: report the history as is
    out.history.push_back(rnorm);
  }

  out.field = ScalarField(grid, u);
  out.residual_norm = rnorm;
  out.converged = rnorm <= params.tol;
  return out;
}

std::pair<ScalarField, std::function<SmallVec(const SmallVec&)>> analytic_tanh_heteroclinic(
    const Grid& grid) {
  if (grid.dim() != 1 || grid.is_periodic())
    throw std::invalid_argument("the tanh layer needs a 1D clamped grid");
  const double s = 1.0 / std::sqrt(2.0);
  ScalarField f = sample_field([s](const SmallVec& x) { return std::tanh(s * x[0]); }, grid);
  auto grad = [s](const SmallVec& x) {
    double c = std::cosh(s * x[0]);
    SmallVec g(1);
    g[0] = s / (c * c);
    return g;
  };
  return {std::move(f), grad};
}

std::pair<ScalarField, std::function<SmallVec(const SmallVec&)>> analytic_constant(
    double a, const Grid& grid) {
  ScalarField f(grid, a);
  int dim = grid.dim();
  auto grad = [dim](const SmallVec&) { return SmallVec(dim); };
  return {std::move(f), grad};
}

}  // namespace modica
