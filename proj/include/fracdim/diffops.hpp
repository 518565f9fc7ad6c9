#pragma once

#include <vector>

#include "fracdim/fields.hpp"
#include "fracdim/measure.hpp"

namespace fracdim {

/// Diagonal orthogonal frame whose Lame coefficients are the NIDS densities
/// of states: H_k(x) = c1(alpha_k, x_k). Metric g_kk = H_k^2, J = H1 H2 H3.
struct LameFrame {
    explicit LameFrame(MultiIndex a, double fd_step_ = 1e-3) : alphas(a), fd_step(fd_step_) {}
    MultiIndex alphas;
    /// Base step for finite-difference differentiation of analytic fields,
    /// scaled by max(1, |x_k|) per evaluation point.
    double fd_step;

    double lame(int k, const Point& p) const;
    double jacobian(const Point& p) const;
};

enum class Spacing { UniformPhysical, UniformEffective };

struct GridAxis {
    double a, b;
    int nodes;
};

/// Structured grid over a box. When any alpha_k != 1 the box must exclude
/// the coordinate planes (a_k > 0); nodes >= 3 per axis.
struct Grid3 {
    std::array<GridAxis, 3> axes;
    Spacing spacing = Spacing::UniformEffective;
};

/// Classical partial derivative of an analytic field along axis k, 4th-order
/// central differences plus one Richardson level.
double partial_classical(const ScalarField& f, int k, double h, const Point& p);

/// Classical second partial derivative, same stencil family.
double partial2_classical(const ScalarField& f, int k, double h, const Point& p);

/// The operator d/dX_k = (1/c1(alpha_k, x_k)) d/dx_k.
/// Throws DomainError on the singular plane x_k = 0 (alpha_k != 1).
double partial_alpha(const ScalarField& f, int k, const LameFrame& frame, const Point& p);

/// Orthonormal-frame gradient, component k = (1/H_k) df/dx_k.
/// With covariant = true the covariant components (1/H_k^2) df/dx_k are
/// returned instead.
VectorField grad_alpha(const ScalarField& f, const LameFrame& frame, bool covariant = false);

ScalarField div_alpha(const VectorField& u, const LameFrame& frame);

VectorField curl_alpha(const VectorField& u, const LameFrame& frame);

/// Expanded scalar Laplacian: sum_k (1/c1^2)(d2f/dx_k^2 - ((a_k-1)/x_k) df/dx_k).
ScalarField scalar_laplacian(const ScalarField& f, const LameFrame& frame);

/// grad(div u) - curl(curl u).
VectorField vector_laplacian(const VectorField& u, const LameFrame& frame);

/// (1/sqrt g) d_k (sqrt g g^{kk} d_k f); coincides with scalar_laplacian for
/// the diagonal frame (computed through an independent code path).
ScalarField laplace_beltrami(const ScalarField& f, const LameFrame& frame);

/// Grid sampling of an analytic field (row-major, x3 fastest). The
/// multi-index fixes node placement on UniformEffective grids and must match
/// the one later passed to grid_partial_alpha.
std::vector<double> sample_grid(const ScalarField& f, const Grid3& grid,
                                const MultiIndex& alphas);

/// d/dX_k of a sampled field, returned on the same grid. UniformEffective
/// grids use uniform central stencils in X; UniformPhysical grids use
/// variable-spacing 3-point stencils in x divided by the local weight.
std::vector<double> grid_partial_alpha(const std::vector<double>& values, const Grid3& grid,
                                       int axis, const MultiIndex& alphas);

/// Physical node positions of one grid axis.
std::vector<double> grid_axis_coords(const Grid3& grid, int axis, const MultiIndex& alphas);

} // namespace fracdim
