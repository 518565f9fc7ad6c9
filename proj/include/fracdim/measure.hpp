#pragma once

#include <array>

#include "fracdim/errors.hpp"

namespace fracdim {

/// One axis dimension alpha_k > 0 of an anisotropic non-integer dimensional
/// product space.
class AxisDimension {
public:
    explicit AxisDimension(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// The triple (alpha_1, alpha_2, alpha_3). The total dimension D is always
/// recomputed from the axes. By default 0 < D <= 3; construct with
/// relaxed = true to allow D > 3 (fractal-curve flows with alpha_k > 1).
class MultiIndex {
public:
    MultiIndex(AxisDimension a1, AxisDimension a2, AxisDimension a3, bool relaxed = false);
    const AxisDimension& axis(int k) const { return alphas_[static_cast<std::size_t>(k)]; }
    double total() const;
    bool relaxed() const { return relaxed_; }
    bool isotropic() const;

private:
    std::array<AxisDimension, 3> alphas_;
    bool relaxed_;
};

/// Box-counting dimensions of the three coordinate cross-sections,
/// each constrained to (0, 2).
struct CrossSectionDims {
    CrossSectionDims(double xy, double xz, double yz);
    double d_xy, d_xz, d_yz;
};

enum class WeightFamily {
    Nids,             // pi^{a/2}/Gamma(a/2) * |x|^{a-1}
    RiemannLiouville, // |x-a|^{a-1} / Gamma(alpha), anchored at a
    ModifiedRL,       // alpha * |b-x|^{alpha-1}, anchored at b
};

/// A per-axis density-of-states family. The anchor is the interval endpoint
/// the fractional-integral families are taken from (a for RL, b for
/// modified RL); the non-integer-dimensional family is always anchored at 0.
class WeightSpec {
public:
    static WeightSpec nids(AxisDimension alpha);
    static WeightSpec riemann_liouville(AxisDimension alpha, double a = 0.0);
    static WeightSpec modified_rl(AxisDimension alpha, double b = 0.0);

    WeightFamily family() const { return family_; }
    double alpha() const { return alpha_.value(); }
    double anchor() const { return anchor_; }

private:
    WeightSpec(WeightFamily f, AxisDimension alpha, double anchor)
        : family_(f), alpha_(alpha), anchor_(anchor) {}
    WeightFamily family_;
    AxisDimension alpha_;
    double anchor_;
};

/// Density of states c_1(alpha, x) of the selected family. At the family's
/// singular point the value is the limit for alpha >= 1 (0 for alpha > 1,
/// 1 for alpha = 1) and a DomainError for alpha < 1.
double weight(const WeightSpec& spec, double x);

enum class CoordinateVariant {
    X, // non-integer-dimensional: pi^{a/2}/(2 Gamma(a/2+1)) sgn(x)|x|^a
    Q, // fractional-space:        sgn(x)|x|^a / Gamma(a+1)
};

struct EffectiveCoordinateMap {
    EffectiveCoordinateMap(AxisDimension a, CoordinateVariant v) : alpha(a), variant(v) {}
    AxisDimension alpha;
    CoordinateVariant variant;
};

/// Effective coordinate: the exact antiderivative of the corresponding
/// weight, odd and strictly increasing in x.
double effective_coordinate(const EffectiveCoordinateMap& map, double x);

/// Inverse of effective_coordinate (closed form, sign preserving).
double inverse_effective_coordinate(const EffectiveCoordinateMap& map, double X);

/// V_alpha(R) = pi^{a/2}/Gamma(a/2+1) * R^a
double ball_volume(const AxisDimension& alpha, double R);

/// S_{alpha-1}(r) = 2 pi^{a/2}/Gamma(a/2) * r^{a-1}
double sphere_area(const AxisDimension& alpha, double r);

/// alpha_k = D - d_perp where d_perp is the dimension of the perpendicular
/// cross-section.
AxisDimension axis_dimension_from_cross_section(double D, double d_perp);

/// Mass of a rectangular parallelepiped with edges L under the product
/// measure: rho0 * prod_k pi^{a_k/2}/(a_k Gamma(a_k/2)) L_k^{a_k}.
double parallelepiped_mass(const MultiIndex& alphas, const std::array<double, 3>& L,
                           double rho0);

} // namespace fracdim
