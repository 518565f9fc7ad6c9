#pragma once

#include <vector>

#include "fracdim/diffops.hpp"
#include "fracdim/fields.hpp"
#include "fracdim/measure.hpp"

namespace fracdim {

enum class LaplacianKind {
    PS,        // Palmer-Stavrinou: sum (d2 + ((a_k-1)/x_k) d1)
    K1,        // Calcagni, isotropic alpha; equals PS with a_k = a
    K2,        // K1 + ((a-1)(a-3)/(4 x_k^2)) phi
    Kl,        // K1 + (((a-2)^2 - 4 l^2)/(4 x_k^2)) phi
    NEWS,      // sum (1/c1^2)(d2 - ((a_k-1)/x_k) d1)
    ZMNApprox, // K2 with per-axis alpha_k
};

/// One of the competing scalar Laplacians. The K-family (K1/K2/Kl) requires
/// an isotropic multi-index; PS, NEWS and ZMN accept anisotropic ones.
struct LaplacianSpec {
    LaplacianSpec(LaplacianKind kind_, MultiIndex alphas_, double l_ = 0.5);
    LaplacianKind kind;
    MultiIndex alphas;
    double l; // Calcagni parameter, Kl only
};

/// Evaluate the selected Laplacian (expanded form) at a point with all
/// x_k > 0. Analytic fields are differentiated as in diffops.
double apply_laplacian(const LaplacianSpec& spec, const ScalarField& f, const Point& at,
                       double fd_step = 1e-3);

enum class FirstOrderKind { Calcagni, ZMN };

/// D_{alpha,k} f = df/dx_k + ((alpha_k - 1)/(2 x_k)) f. Both kinds share the
/// expanded form; they are kept separate for provenance.
double apply_first_order(FirstOrderKind kind, int axis, const MultiIndex& alphas,
                         const ScalarField& f, const Point& at, double fd_step = 1e-3);

/// Definitional (weighted-divergence) forms of the K-family, evaluated by
/// direct differentiation of the measure-weight products rather than the
/// expanded coefficients. which selects K1, K2 or Kl.
enum class KForm { K1, K2, Kl };
double apply_k_definitional(KForm which, double alpha, double l, const ScalarField& f,
                            const Point& at, double fd_step = 1e-3,
                            bool anisotropic_weight = false);

struct DiscrepancyReport {
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

/// Max and mean |a(f) - b(f)| over the sample points.
DiscrepancyReport operator_discrepancy(const LaplacianSpec& a, const LaplacianSpec& b,
                                       const ScalarField& f, const std::vector<Point>& points,
                                       double fd_step = 1e-3);

/// Analytic NEWS - PS difference at a point, from the expanded forms:
/// sum_k [(1/c1^2 - 1) d2 - ((a_k-1)/x_k)(1/c1^2 + 1) d1].
double news_minus_ps_analytic(const MultiIndex& alphas, const ScalarField& f, const Point& at,
                              double fd_step = 1e-3);

} // namespace fracdim
