#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "fracdim/measure.hpp"

namespace fracdim {

enum class QuadRule {
    SubstitutionGaussLegendre, // change of variable u = W(x) removes the weight
    PlainGaussLegendre,        // integrate f(x) c1(x) directly
    MonteCarlo,
};

struct QuadratureSpec {
    QuadRule rule = QuadRule::SubstitutionGaussLegendre;
    int nodes_per_panel = 16;
    int panels = 8;
    double rel_tol = 1e-9;
    std::uint64_t seed = 0;      // MonteCarlo only (mandatory there)
    std::size_t samples = 100000; // MonteCarlo only

    void validate() const;
};

struct Interval {
    double a, b;
};

/// Cartesian product W = W1 x W2 x W3 of per-axis intervals. Intervals may
/// span 0; the weight singularity there is handled by substitution.
struct Box3 {
    std::array<Interval, 3> axes;
};

using Fn1 = std::function<double(double)>;
using Fn3 = std::function<double(double, double, double)>;

/// Weighted 1-D integral  int_a^b f(x) c1(alpha, x) dx.
/// Throws ToleranceNotMet when the panel-refinement disagreement exceeds
/// spec q.rel_tol relative to the result.
double integrate_1d(const Fn1& f, Interval iv, const WeightSpec& w, const QuadratureSpec& q);

/// Same, but also reports the refinement disagreement instead of throwing.
struct Estimate {
    double value;
    double disagreement;
};
Estimate integrate_1d_estimate(const Fn1& f, Interval iv, const WeightSpec& w,
                               const QuadratureSpec& q);

/// Product-measure integral over a box with per-axis NIDS weights
/// (Fubini, x3 innermost).
double integrate_product(const Fn3& f, const Box3& box, const MultiIndex& alphas,
                         const QuadratureSpec& q);

/// (2 pi^{D/2} / Gamma(D/2)) int_0^rmax f(r) r^{D-1} dr with the radial
/// weight removed by the substitution u = r^D.
double radial_integral(const Fn1& f, double D, double rmax, const QuadratureSpec& q);

/// int_0^{2pi} |cos p|^{a1-1} |sin p|^{a2-1} dp, by quadrature (independent
/// of the Gamma-function closed form it is tested against).
double angular_integral_phi(double alpha1, double alpha2, const QuadratureSpec& q);

/// int_0^pi |sin t|^{a12-1} |cos t|^{a3-1} dt.
double angular_integral_theta(double alpha12, double alpha3, const QuadratureSpec& q);

struct McResult {
    double estimate;
    double stderr_est;
};

/// Importance-sampled product integral: each axis is drawn uniformly in its
/// effective coordinate (inverse transform), so the weight cancels exactly.
/// Deterministic: one counter-based generator keyed by (seed, sample, axis).
McResult mc_integrate_product(const Fn3& f, const Box3& box, const MultiIndex& alphas,
                              std::uint64_t seed, std::size_t n);

/// Upper bound on the tail (2 pi^{D/2}/Gamma(D/2)) int_rmax^inf e^{-r^2} r^{D-1} dr,
/// valid for rmax^2 > D/2 - 1.
double gaussian_tail_bound(double D, double rmax);

} // namespace fracdim
