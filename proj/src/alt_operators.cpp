#include "fracdim/alt_operators.hpp"

#include <cmath>

#include "fracdim/gamma.hpp"

namespace fracdim {
namespace {

void require_positive_octant(const Point& p) {
    for (double x : p)
        if (!(x > 0.0)) throw DomainError("operator defined on the open positive octant only");
}

double fd_h(double fd_step, double x) { return fd_step * std::max(1.0, std::fabs(x)); }

// Isotropic measure weight: prod_k |x_k|^{alpha-1} times a normalization
// constant. The constant cancels in every K-operator; both normalizations
// (1/Gamma(alpha) per axis, or the non-integer-dimensional one) are exposed
// so that tests can assert the cancellation.
double measure_weight(double alpha, const Point& p, bool anisotropic_norm) {
    double c = anisotropic_norm
                   ? std::pow(M_PI, 0.5 * alpha) / gamma_fn(0.5 * alpha + 1.0)
                   : 1.0 / gamma_fn(alpha);
    double v = 1.0;
    for (double x : p) v *= c * std::pow(std::fabs(x), alpha - 1.0);
    return v;
}

} // namespace

LaplacianSpec::LaplacianSpec(LaplacianKind kind_, MultiIndex alphas_, double l_)
    : kind(kind_), alphas(alphas_), l(l_) {
    const bool k_family =
        kind == LaplacianKind::K1 || kind == LaplacianKind::K2 || kind == LaplacianKind::Kl;
    if (k_family && !alphas.isotropic())
        throw InvalidDimension("the K-family is defined for isotropic alpha only");
}

double apply_laplacian(const LaplacianSpec& spec, const ScalarField& f, const Point& at,
                       double fd_step) {
    require_positive_octant(at);
    double s = 0.0;
    const double fval = f(at);
    for (int k = 0; k < 3; ++k) {
        const double a = spec.alphas.axis(k).value();
        const double x = at[static_cast<std::size_t>(k)];
        const double h = fd_h(fd_step, x);
        const double d1 = partial_classical(f, k, h, at);
        const double d2 = partial2_classical(f, k, h, at);
        switch (spec.kind) {
        case LaplacianKind::PS:
        case LaplacianKind::K1:
            s += d2 + (a - 1.0) / x * d1;
            break;
        case LaplacianKind::K2:
            s += d2 + (a - 1.0) / x * d1 + (a - 1.0) * (a - 3.0) / (4.0 * x * x) * fval;
            break;
        case LaplacianKind::Kl: {
            const double c0 = ((a - 2.0) * (a - 2.0) - 4.0 * spec.l * spec.l) / (4.0 * x * x);
            s += d2 + (a - 1.0) / x * d1 + c0 * fval;
            break;
        }
        case LaplacianKind::NEWS: {
            const double c1 = weight(WeightSpec::nids(spec.alphas.axis(k)), x);
            s += (d2 - (a - 1.0) / x * d1) / (c1 * c1);
            break;
        }
        case LaplacianKind::ZMNApprox:
            s += d2 + (a - 1.0) / x * d1 + (a - 1.0) * (a - 3.0) / (4.0 * x * x) * fval;
            break;
        }
    }
    return s;
}

double apply_first_order(FirstOrderKind /*kind*/, int axis, const MultiIndex& alphas,
                         const ScalarField& f, const Point& at, double fd_step) {
    if (!(at[static_cast<std::size_t>(axis)] > 0.0))
        throw DomainError("first-order operator requires x_k > 0");
    const double a = alphas.axis(axis).value();
    const double x = at[static_cast<std::size_t>(axis)];
    return partial_classical(f, axis, fd_h(fd_step, x), at) + (a - 1.0) / (2.0 * x) * f(at);
}

double apply_k_definitional(KForm which, double alpha, double l, const ScalarField& f,
                            const Point& at, double fd_step, bool anisotropic_weight) {
    require_positive_octant(at);
    if (which == KForm::K1) l = 1.0 - 0.5 * alpha;
    if (which == KForm::K2) l = 0.5;

    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double x = at[static_cast<std::size_t>(k)];
        const double h = fd_h(fd_step, x);
        if (which == KForm::K1) {
            // (1/v) d_k ( v d_k f )
            ScalarField flux([=, &f](const Point& q) {
                return measure_weight(alpha, q, anisotropic_weight) *
                       partial_classical(f, k, fd_h(fd_step, q[static_cast<std::size_t>(k)]), q);
            });
            s += partial_classical(flux, k, h, at) / measure_weight(alpha, at, anisotropic_weight);
        } else if (which == KForm::K2) {
            // (1/sqrt v) d2_k ( sqrt v f )
            ScalarField g([=, &f](const Point& q) {
                return std::sqrt(measure_weight(alpha, q, anisotropic_weight)) * f(q);
            });
            s += partial2_classical(g, k, h, at) /
                 std::sqrt(measure_weight(alpha, at, anisotropic_weight));
        } else {
            // (x^{l-1/2}/sqrt v) d_k ( x^{1-2l} d_k ( x^{l-1/2} sqrt v f ) );
            // expanding gives f'' + (alpha-1)/x f' + ((alpha-2)^2-4l^2)/(4x^2) f
            auto xl = [l, k](const Point& q) {
                return std::pow(q[static_cast<std::size_t>(k)], l - 0.5);
            };
            ScalarField inner([=, &f](const Point& q) {
                return xl(q) * std::sqrt(measure_weight(alpha, q, anisotropic_weight)) * f(q);
            });
            ScalarField mid([=](const Point& q) {
                return std::pow(q[static_cast<std::size_t>(k)], 1.0 - 2.0 * l) *
                       partial_classical(inner, k, fd_h(fd_step, q[static_cast<std::size_t>(k)]), q);
            });
            s += xl(at) * partial_classical(mid, k, h, at) /
                 std::sqrt(measure_weight(alpha, at, anisotropic_weight));
        }
    }
    return s;
}

DiscrepancyReport operator_discrepancy(const LaplacianSpec& a, const LaplacianSpec& b,
                                       const ScalarField& f, const std::vector<Point>& points,
                                       double fd_step) {
    DiscrepancyReport r;
    if (points.empty()) return r;
    for (const Point& p : points) {
        const double d = std::fabs(apply_laplacian(a, f, p, fd_step) -
                                   apply_laplacian(b, f, p, fd_step));
        r.max_abs = std::max(r.max_abs, d);
        r.mean_abs += d;
    }
    r.mean_abs /= static_cast<double>(points.size());
    return r;
}

double news_minus_ps_analytic(const MultiIndex& alphas, const ScalarField& f, const Point& at,
                              double fd_step) {
    require_positive_octant(at);
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double a = alphas.axis(k).value();
        const double x = at[static_cast<std::size_t>(k)];
        const double h = fd_h(fd_step, x);
        const double d1 = partial_classical(f, k, h, at);
        const double d2 = partial2_classical(f, k, h, at);
        const double c1 = weight(WeightSpec::nids(alphas.axis(k)), x);
        const double ic2 = 1.0 / (c1 * c1);
        s += (ic2 - 1.0) * d2 - (a - 1.0) / x * (ic2 + 1.0) * d1;
    }
    return s;
}

} // namespace fracdim
