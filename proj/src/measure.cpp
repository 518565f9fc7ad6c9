#include "fracdim/measure.hpp"

#include <cmath>
#include <string>

#include "fracdim/gamma.hpp"

namespace fracdim {
namespace {

double nids_prefactor(double alpha) {
    return std::pow(M_PI, 0.5 * alpha) / gamma_fn(0.5 * alpha);
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace

AxisDimension::AxisDimension(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw InvalidDimension("axis dimension alpha must be finite and > 0, got " +
                               std::to_string(alpha));
}

MultiIndex::MultiIndex(AxisDimension a1, AxisDimension a2, AxisDimension a3, bool relaxed)
    : alphas_{a1, a2, a3}, relaxed_(relaxed) {
    if (!relaxed_ && total() > 3.0 + 1e-12)
        throw InvalidDimension("total dimension D = " + std::to_string(total()) +
                               " exceeds 3 (pass relaxed=true to allow)");
}

double MultiIndex::total() const {
    return alphas_[0].value() + alphas_[1].value() + alphas_[2].value();
}

bool MultiIndex::isotropic() const {
    return alphas_[0].value() == alphas_[1].value() &&
           alphas_[1].value() == alphas_[2].value();
}

CrossSectionDims::CrossSectionDims(double xy, double xz, double yz)
    : d_xy(xy), d_xz(xz), d_yz(yz) {
    for (double d : {xy, xz, yz})
        if (!(d > 0.0 && d < 2.0))
            throw InvalidDimension("cross-section dimension must lie in (0, 2), got " +
                                   std::to_string(d));
}

WeightSpec WeightSpec::nids(AxisDimension alpha) {
    return WeightSpec(WeightFamily::Nids, alpha, 0.0);
}
WeightSpec WeightSpec::riemann_liouville(AxisDimension alpha, double a) {
    return WeightSpec(WeightFamily::RiemannLiouville, alpha, a);
}
WeightSpec WeightSpec::modified_rl(AxisDimension alpha, double b) {
    return WeightSpec(WeightFamily::ModifiedRL, alpha, b);
}

double weight(const WeightSpec& spec, double x) {
    const double alpha = spec.alpha();
    double u; // distance to the singular point
    switch (spec.family()) {
    case WeightFamily::Nids:             u = std::fabs(x); break;
    case WeightFamily::RiemannLiouville: u = std::fabs(x - spec.anchor()); break;
    case WeightFamily::ModifiedRL:       u = std::fabs(spec.anchor() - x); break;
    default:                             u = std::fabs(x); break;
    }
    if (u == 0.0) {
        // limit value: the weight is |u|^{alpha-1} times a positive constant
        if (alpha > 1.0) return 0.0;
        if (alpha == 1.0) return 1.0;
        throw DomainError("density of states diverges at its singular point for alpha < 1");
    }
    const double power = std::pow(u, alpha - 1.0);
    switch (spec.family()) {
    case WeightFamily::Nids:             return nids_prefactor(alpha) * power;
    case WeightFamily::RiemannLiouville: return power / gamma_fn(alpha);
    case WeightFamily::ModifiedRL:       return alpha * power;
    }
    return 0.0; // unreachable
}

double effective_coordinate(const EffectiveCoordinateMap& map, double x) {
    const double alpha = map.alpha.value();
    if (x == 0.0) return 0.0;
    const double p = sgn(x) * std::pow(std::fabs(x), alpha);
    if (map.variant == CoordinateVariant::X)
        return std::pow(M_PI, 0.5 * alpha) / (2.0 * gamma_fn(0.5 * alpha + 1.0)) * p;
    return p / gamma_fn(alpha + 1.0);
}

double inverse_effective_coordinate(const EffectiveCoordinateMap& map, double X) {
    const double alpha = map.alpha.value();
    if (X == 0.0) return 0.0;
    double pref;
    if (map.variant == CoordinateVariant::X)
        pref = std::pow(M_PI, 0.5 * alpha) / (2.0 * gamma_fn(0.5 * alpha + 1.0));
    else
        pref = 1.0 / gamma_fn(alpha + 1.0);
    return sgn(X) * std::pow(std::fabs(X) / pref, 1.0 / alpha);
}

double ball_volume(const AxisDimension& alpha, double R) {
    if (R < 0.0) throw NegativeRadius("ball_volume: R must be >= 0");
    const double a = alpha.value();
    return std::pow(M_PI, 0.5 * a) / gamma_fn(0.5 * a + 1.0) * std::pow(R, a);
}

double sphere_area(const AxisDimension& alpha, double r) {
    if (r < 0.0) throw NegativeRadius("sphere_area: r must be >= 0");
    const double a = alpha.value();
    if (r == 0.0) {
        if (a > 1.0) return 0.0;
        if (a == 1.0) return 2.0;
        throw DomainError("sphere_area diverges at r = 0 for alpha < 1");
    }
    return 2.0 * nids_prefactor(a) * std::pow(r, a - 1.0);
}

AxisDimension axis_dimension_from_cross_section(double D, double d_perp) {
    if (!(d_perp > 0.0 && d_perp <= 2.0))
        throw InvalidDimension("cross-section dimension must lie in (0, 2]");
    const double a = D - d_perp;
    if (a <= 0.0)
        throw InvalidDimension("D - d_perp = " + std::to_string(a) + " is not a valid axis dimension");
    return AxisDimension(a);
}

double parallelepiped_mass(const MultiIndex& alphas, const std::array<double, 3>& L,
                           double rho0) {
    if (rho0 <= 0.0) throw InvalidDimension("parallelepiped_mass: rho0 must be > 0");
    double m = rho0;
    for (int k = 0; k < 3; ++k) {
        if (L[static_cast<std::size_t>(k)] <= 0.0)
            throw InvalidDimension("parallelepiped_mass: edges must be > 0");
        const double a = alphas.axis(k).value();
        m *= nids_prefactor(a) / a * std::pow(L[static_cast<std::size_t>(k)], a);
    }
    return m;
}

} // namespace fracdim
