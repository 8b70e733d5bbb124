#ifndef MODICA_SOLVER_HPP
#define MODICA_SOLVER_HPP

#include <functional>
#include <vector>

#include "modica/field_ops.hpp"
#include "modica/grid.hpp"
#include "modica/phi.hpp"
#include "modica/sources.hpp"

namespace modica {

enum class JacobianMode { numeric_colored, picard };

struct SolveParams {
  int max_iters = 50;
  double tol = 1e-10;        // residual sup-norm target
  double damping = 1.0;      // initial step factor, backtracking halves it
  int max_halvings = 20;
  JacobianMode jacobian = JacobianMode::numeric_colored;
  int linear_max_iters = 500;
};

struct SolveOutcome {
  ScalarField field;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // accepted-step residual norms, initial first
};

/// Residual of the equation at every non-boundary node:
/// flux_divergence(u) - f(u) - g(grad u, Su). Boundary nodes of clamped
/// grids are held at their Dirichlet values and report zero.
ScalarField residual_field(const PhiModel& model, const SourceModel& src, const SOperator& s,
                           const ScalarField& field);

/// Damped Newton iteration on the discrete residual. The Jacobian comes
/// from forward differences over a distance-3 node coloring (the residual
/// stencil is the 3^d box), or from the frozen-slope linearization in
/// picard mode. Linear solves use BiCGStab with diagonal preconditioning
/// and deterministic reductions.
SolveOutcome solve_newton(const PhiModel& model, const SourceModel& src, const SOperator& s,
                          const ScalarField& seed_field, const SolveParams& params);

/// 1D transition layer u = tanh(x / sqrt(2)) for f(u) = u^3 - u on a
/// clamped grid, with its exact gradient.
std::pair<ScalarField, std::function<SmallVec(const SmallVec&)>> analytic_tanh_heteroclinic(
    const Grid& grid);

/// Constant field with its (zero) exact gradient.
std::pair<ScalarField, std::function<SmallVec(const SmallVec&)>> analytic_constant(
    double a, const Grid& grid);

}  // namespace modica

#endif
