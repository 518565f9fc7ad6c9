#include "fracdim/gamma.hpp"

#include <cmath>
#include <limits>

namespace fracdim {
namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma_positive(double x) {
    // valid for x >= 0.5
    double a = kLanczos[0];
    double t = x + kLanczosG - 0.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i - 1.0);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

} // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        const double s = std::sin(M_PI * x);
        if (s == 0.0) return std::numeric_limits<double>::quiet_NaN(); // poles
        return M_PI / (s * lanczos_gamma_positive(1.0 - x));
    }
    return lanczos_gamma_positive(x);
}

double log_gamma(double x) {
    if (x >= 0.5) {
        double a = kLanczos[0];
        double t = x + kLanczosG - 0.5;
        for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i - 1.0);
        return 0.5 * std::log(2.0 * M_PI) + (x - 0.5) * std::log(t) - t + std::log(a);
    }
    return std::log(std::fabs(gamma_fn(x)));
}

} // namespace fracdim
