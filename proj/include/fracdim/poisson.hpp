#pragma once

#include <functional>
#include <utility>

#include "fracdim/measure.hpp"

namespace fracdim {

using RealFn = std::function<double(double)>;

enum class PoissonOperator {
    NEWS, // (1/c1^2)(phi'' - ((a-1)/x) phi')
    K2,   // phi'' + ((a-1)/x) phi' + ((a-1)(a-3)/(4x^2)) phi
};

/// Single-variable Poisson problem L phi = f on [a, b], a > 0, with
/// Dirichlet values at both ends.
struct PoissonProblem {
    PoissonOperator op;
    AxisDimension alpha;
    RealFn f;
    double a, b;
    double phi_a = 0.0, phi_b = 0.0;
};

struct PoissonSolution {
    RealFn phi;
    double C1 = 0.0, C2 = 0.0; // homogeneous-basis constants (analytic path)
    double residual_norm = 0.0; // max |L phi - f| on a 200-point grid
};

/// The two homogeneous solutions of the selected operator.
/// NEWS: (1, x^alpha); K2: (x^{(3-alpha)/2}, x^{(1-alpha)/2}).
std::pair<RealFn, RealFn> poisson_homogeneous_basis(PoissonOperator op, AxisDimension alpha);

/// Apply the operator to a callable at x > 0 by finite differences.
double apply_poisson_operator(PoissonOperator op, AxisDimension alpha, const RealFn& phi,
                              double x);

/// Variation of parameters over the homogeneous basis; indefinite integrals
/// are anchored at the left endpoint, boundary constants fitted by a 2x2
/// solve. Throws SingularBoundarySystem when that system is rank-deficient.
PoissonSolution poisson_solve_analytic(const PoissonProblem& problem);

/// Independent finite-difference solver. The NEWS path transforms to the
/// effective coordinate u = X(x) where the equation becomes phi_uu = f(x(u));
/// the K2 path uses variable-coefficient central differences in x.
/// Throws GridTooCoarse when the Richardson error estimate exceeds 1e-4.
PoissonSolution poisson_solve_numeric(const PoissonProblem& problem, int nodes);

/// The particular solution printed in the source derivation for the NEWS
/// operator, evaluated by quadrature; exposed so its residual can be checked
/// against the equation itself.
RealFn news_reference_particular(AxisDimension alpha, const RealFn& f, double anchor);

/// Max |L phi - f| over n uniformly spaced interior points of [a, b].
double poisson_residual(PoissonOperator op, AxisDimension alpha, const RealFn& phi,
                        const RealFn& f, double a, double b, int n);

} // namespace fracdim
