#ifndef MODICA_FIELD_OPS_HPP
#define MODICA_FIELD_OPS_HPP

#include "modica/grid.hpp"
#include "modica/phi.hpp"

namespace modica {

/// Second-order gradient: central differences with periodic wrap, one-sided
/// second-order stencils on clamped boundaries.
VectorField gradient_of(const ScalarField& field);

/// Second derivatives: 3-point stencils on the diagonal, nested first
/// derivatives off the diagonal (the 4-point cross stencil at interior
/// nodes). Symmetric by construction.
MatrixField hessian_of(const ScalarField& field);

/// Conservative divergence of Phi'(|grad u|^2) grad u: face fluxes use the
/// exact one-sided normal difference and averaged tangential central
/// differences, then are differenced per axis. Reduces to the standard
/// Laplacian stencil when Phi' = 1. Faces of singular profiles evaluate
/// Phi' at max(r, 1e-12). Boundary nodes of clamped grids are left at 0.
ScalarField flux_divergence(const PhiModel& model, const ScalarField& field);

namespace serial {
/// Plain-loop reference implementations kept for testing and benchmarks;
/// bit-identical to the parallel kernels.
VectorField gradient_of(const ScalarField& field);
MatrixField hessian_of(const ScalarField& field);
ScalarField flux_divergence(const PhiModel& model, const ScalarField& field);
}  // namespace serial

}  // namespace modica

#endif
