#include "fracdim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "fracdim/gamma.hpp"

namespace fracdim {
namespace {

struct GlRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre nodes/weights by Newton iteration on the recurrence.
GlRule make_gl(int n) {
    GlRule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[static_cast<std::size_t>(i)] = -x;
        r.w[static_cast<std::size_t>(i)] = w;
        r.x[static_cast<std::size_t>(n - 1 - i)] = x;
        r.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

const GlRule& gl_rule(int n) {
    static std::map<int, GlRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
    return it->second;
}

// Panel breakpoints on [a, b], geometrically graded toward the endpoint
// carrying an algebraic singularity (grade < 0: none; 0: toward a; 1: toward b).
std::vector<double> breakpoints(double a, double b, int panels, int grade) {
    std::vector<double> t(static_cast<std::size_t>(panels) + 1);
    if (grade < 0) {
        for (int i = 0; i <= panels; ++i)
            t[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
    } else if (grade == 0) {
        t[0] = a;
        for (int i = 1; i <= panels; ++i)
            t[static_cast<std::size_t>(i)] = a + (b - a) * std::ldexp(1.0, -(panels - i));
    } else {
        t[static_cast<std::size_t>(panels)] = b;
        for (int i = 0; i < panels; ++i)
            t[static_cast<std::size_t>(i)] = b - (b - a) * std::ldexp(1.0, -i);
    }
    return t;
}

template <class F>
double composite_gl(const F& f, double a, double b, int nodes, int panels, int grade) {
    const GlRule& gl = gl_rule(nodes);
    const auto bp = breakpoints(a, b, panels, grade);
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = bp[static_cast<std::size_t>(p)];
        const double hi = bp[static_cast<std::size_t>(p) + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i)
            s += gl.w[static_cast<std::size_t>(i)] * f(mid + half * gl.x[static_cast<std::size_t>(i)]);
        sum += half * s;
    }
    return sum;
}

// Antiderivative of the weight (the substitution variable u = W(x)) and its
// inverse, per family. W is odd around the family's singular point.
double weight_antideriv(const WeightSpec& w, double x) {
    const double alpha = w.alpha();
    switch (w.family()) {
    case WeightFamily::Nids:
        return effective_coordinate({AxisDimension(alpha), CoordinateVariant::X}, x);
    case WeightFamily::RiemannLiouville:
        return effective_coordinate({AxisDimension(alpha), CoordinateVariant::Q}, x - w.anchor());
    case WeightFamily::ModifiedRL: {
        const double v = w.anchor() - x;
        const double s = (v > 0.0) - (v < 0.0);
        return -s * std::pow(std::fabs(v), alpha);
    }
    }
    return 0.0;
}

double weight_antideriv_inv(const WeightSpec& w, double u) {
    const double alpha = w.alpha();
    switch (w.family()) {
    case WeightFamily::Nids:
        return inverse_effective_coordinate({AxisDimension(alpha), CoordinateVariant::X}, u);
    case WeightFamily::RiemannLiouville:
        return w.anchor() +
               inverse_effective_coordinate({AxisDimension(alpha), CoordinateVariant::Q}, u);
    case WeightFamily::ModifiedRL: {
        if (u == 0.0) return w.anchor();
        const double s = (u > 0.0) - (u < 0.0);
        return w.anchor() + s * std::pow(std::fabs(u), 1.0 / alpha);
    }
    }
    return 0.0;
}

double singular_point(const WeightSpec& w) {
    return w.family() == WeightFamily::Nids ? 0.0 : w.anchor();
}

// One quadrature node (abscissa in x, cumulative weight) for the tensor grid.
struct Node {
    double x, w;
};

// Per-axis node list for the weighted integral, pieces split at the
// singular point with panels graded toward it.
std::vector<Node> axis_nodes(Interval iv, const WeightSpec& w, const QuadratureSpec& q,
                             int panels) {
    if (!(iv.a < iv.b)) throw DomainError("integrate: interval must satisfy a < b");
    const double s = singular_point(w);
    std::vector<std::pair<Interval, int>> pieces; // interval + graded end
    if (iv.a < s && s < iv.b) {
        pieces.push_back({{iv.a, s}, 1});
        pieces.push_back({{s, iv.b}, 0});
    } else {
        int grade = (iv.a == s) ? 0 : (iv.b == s ? 1 : (std::fabs(iv.a - s) < std::fabs(iv.b - s) ? 0 : 1));
        pieces.push_back({iv, grade});
    }

    const GlRule& gl = gl_rule(q.nodes_per_panel);
    std::vector<Node> out;
    for (auto& [piece, grade] : pieces) {
        if (q.rule == QuadRule::SubstitutionGaussLegendre) {
            const double ua = weight_antideriv(w, piece.a);
            const double ub = weight_antideriv(w, piece.b);
            const auto bp = breakpoints(ua, ub, panels, grade);
            for (int p = 0; p < panels; ++p) {
                const double mid = 0.5 * (bp[static_cast<std::size_t>(p)] + bp[static_cast<std::size_t>(p) + 1]);
                const double half = 0.5 * (bp[static_cast<std::size_t>(p) + 1] - bp[static_cast<std::size_t>(p)]);
                for (int i = 0; i < q.nodes_per_panel; ++i) {
                    const double u = mid + half * gl.x[static_cast<std::size_t>(i)];
                    out.push_back({weight_antideriv_inv(w, u), half * gl.w[static_cast<std::size_t>(i)]});
                }
            }
        } else {
            const auto bp = breakpoints(piece.a, piece.b, panels, grade);
            for (int p = 0; p < panels; ++p) {
                const double mid = 0.5 * (bp[static_cast<std::size_t>(p)] + bp[static_cast<std::size_t>(p) + 1]);
                const double half = 0.5 * (bp[static_cast<std::size_t>(p) + 1] - bp[static_cast<std::size_t>(p)]);
                for (int i = 0; i < q.nodes_per_panel; ++i) {
                    const double x = mid + half * gl.x[static_cast<std::size_t>(i)];
                    out.push_back({x, half * gl.w[static_cast<std::size_t>(i)] * weight(w, x)});
                }
            }
        }
    }
    return out;
}

double sum_axis(const Fn1& f, const std::vector<Node>& nodes) {
    double s = 0.0;
    for (const Node& n : nodes) s += n.w * f(n.x);
    return s;
}

// Tanh-sinh for integrals over [0, L] with an integrable algebraic
// singularity at 0. The integrand receives the distance from 0, computed in
// a cancellation-free form so nodes approach the endpoint down to ~1e-300
// instead of stalling at machine epsilon away from it.
Estimate de_singular_left_estimate(const Fn1& f, double L, double rel_tol) {
    const double half = 0.5 * L;
    const double tmax = 6.5;
    auto node_sum = [&](double h, bool odd_only) {
        double s = 0.0;
        for (double t = odd_only ? h : 0.0; t <= tmax; t += odd_only ? 2.0 * h : h) {
            const double st = M_PI_2 * std::sinh(t);
            const double ex = std::exp(-2.0 * st);
            const double wt = M_PI_2 * std::cosh(t) * 4.0 * ex / ((1.0 + ex) * (1.0 + ex));
            const double dm = L * ex / (1.0 + ex); // near the singular end
            const double dp = L / (1.0 + ex);      // mirror node
            if (dm > 0.0) s += wt * f(dm);
            if (t > 0.0 && dp < L) s += wt * f(dp);
        }
        return s;
    };
    double h = 0.5;
    double sum = node_sum(h, false);
    double prev = half * h * sum;
    double delta = std::fabs(prev);
    for (int level = 0; level < 10; ++level) {
        h *= 0.5;
        sum += node_sum(h, true);
        const double cur = half * h * sum;
        delta = std::fabs(cur - prev);
        if (delta <= 0.01 * rel_tol * (1.0 + std::fabs(cur)) && level >= 2) return {cur, delta};
        prev = cur;
    }
    return {prev, delta};
}

// splitmix64: counter-based, reproducible across platforms.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97f4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h = splitmix64(splitmix64(seed) ^ counter);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace

void QuadratureSpec::validate() const {
    if (nodes_per_panel < 2) throw DomainError("QuadratureSpec: nodes_per_panel must be >= 2");
    if (panels < 1) throw DomainError("QuadratureSpec: panels must be >= 1");
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
}

Estimate integrate_1d_estimate(const Fn1& f, Interval iv, const WeightSpec& w,
                               const QuadratureSpec& q) {
    q.validate();
    const double fine = sum_axis(f, axis_nodes(iv, w, q, q.panels));
    const int coarse_panels = std::max(1, q.panels / 2);
    const double coarse = sum_axis(f, axis_nodes(iv, w, q, coarse_panels));
    return {fine, std::fabs(fine - coarse)};
}

double integrate_1d(const Fn1& f, Interval iv, const WeightSpec& w, const QuadratureSpec& q) {
    const Estimate e = integrate_1d_estimate(f, iv, w, q);
    if (e.disagreement > q.rel_tol * (1.0 + std::fabs(e.value)))
        throw ToleranceNotMet("integrate_1d: refinement disagreement above rel_tol",
                              e.disagreement);
    return e.value;
}

namespace {

double product_pass(const Fn3& f, const Box3& box, const MultiIndex& alphas,
                    const QuadratureSpec& q, int panels) {
    std::array<std::vector<Node>, 3> nodes;
    for (int k = 0; k < 3; ++k)
        nodes[static_cast<std::size_t>(k)] =
            axis_nodes(box.axes[static_cast<std::size_t>(k)],
                       WeightSpec::nids(alphas.axis(k)), q, panels);
    double sum = 0.0;
    for (const Node& n1 : nodes[0]) {
        double s1 = 0.0;
        for (const Node& n2 : nodes[1]) {
            double s2 = 0.0;
            for (const Node& n3 : nodes[2]) // x3 innermost (Fubini order)
                s2 += n3.w * f(n1.x, n2.x, n3.x);
            s1 += n2.w * s2;
        }
        sum += n1.w * s1;
    }
    return sum;
}

} // namespace

double integrate_product(const Fn3& f, const Box3& box, const MultiIndex& alphas,
                         const QuadratureSpec& q) {
    q.validate();
    const double fine = product_pass(f, box, alphas, q, q.panels);
    const double coarse = product_pass(f, box, alphas, q, std::max(1, q.panels / 2));
    const double disagreement = std::fabs(fine - coarse);
    if (disagreement > q.rel_tol * (1.0 + std::fabs(fine)))
        throw ToleranceNotMet("integrate_product: refinement disagreement above rel_tol",
                              disagreement);
    return fine;
}

double radial_integral(const Fn1& f, double D, double rmax, const QuadratureSpec& q) {
    q.validate();
    if (!(D > 0.0)) throw InvalidDimension("radial_integral: D must be > 0");
    if (!(rmax > 0.0)) throw DomainError("radial_integral: rmax must be > 0");
    // Tanh-sinh in r absorbs the algebraic r^{D-1} factor at the origin.
    auto g = [&](double r) { return f(r) * std::pow(r, D - 1.0); };
    const double pref = 2.0 * std::pow(M_PI, 0.5 * D) / gamma_fn(0.5 * D);
    const Estimate e = de_singular_left_estimate(g, rmax, q.rel_tol);
    const double disagreement = pref * e.disagreement;
    if (disagreement > q.rel_tol * (1.0 + pref * std::fabs(e.value)))
        throw ToleranceNotMet("radial_integral: refinement disagreement above rel_tol",
                              disagreement);
    return pref * e.value;
}

double angular_integral_phi(double alpha1, double alpha2, const QuadratureSpec& q) {
    q.validate();
    if (!(alpha1 > 0.0 && alpha2 > 0.0))
        throw InvalidDimension("angular_integral_phi: exponents must be > 0");
    // |cos|,|sin| repeat the first-quadrant pattern over each quarter turn.
    // Split at pi/4 and measure each piece from its singular endpoint.
    auto near0 = [&](double d) {
        return std::pow(std::sin(d), alpha2 - 1.0) * std::pow(std::cos(d), alpha1 - 1.0);
    };
    auto near_half_pi = [&](double d) {
        return std::pow(std::sin(d), alpha1 - 1.0) * std::pow(std::cos(d), alpha2 - 1.0);
    };
    return 4.0 * (de_singular_left_estimate(near0, M_PI_2 / 2.0, q.rel_tol).value +
                  de_singular_left_estimate(near_half_pi, M_PI_2 / 2.0, q.rel_tol).value);
}

double angular_integral_theta(double alpha12, double alpha3, const QuadratureSpec& q) {
    q.validate();
    if (!(alpha12 > 0.0 && alpha3 > 0.0))
        throw InvalidDimension("angular_integral_theta: exponents must be > 0");
    auto near0 = [&](double d) {
        return std::pow(std::sin(d), alpha12 - 1.0) * std::pow(std::cos(d), alpha3 - 1.0);
    };
    auto near_half_pi = [&](double d) {
        return std::pow(std::sin(d), alpha3 - 1.0) * std::pow(std::cos(d), alpha12 - 1.0);
    };
    return 2.0 * (de_singular_left_estimate(near0, M_PI_2 / 2.0, q.rel_tol).value +
                  de_singular_left_estimate(near_half_pi, M_PI_2 / 2.0, q.rel_tol).value);
}

McResult mc_integrate_product(const Fn3& f, const Box3& box, const MultiIndex& alphas,
                              std::uint64_t seed, std::size_t n) {
    if (n < 1000) throw DomainError("mc_integrate_product: need at least 1e3 samples");
    std::array<EffectiveCoordinateMap, 3> maps = {
        EffectiveCoordinateMap{alphas.axis(0), CoordinateVariant::X},
        EffectiveCoordinateMap{alphas.axis(1), CoordinateVariant::X},
        EffectiveCoordinateMap{alphas.axis(2), CoordinateVariant::X},
    };
    std::array<double, 3> ua{}, ub{};
    double volume = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        ua[k] = effective_coordinate(maps[k], box.axes[k].a);
        ub[k] = effective_coordinate(maps[k], box.axes[k].b);
        volume *= ub[k] - ua[k];
    }
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::array<double, 3> x{};
        for (std::size_t k = 0; k < 3; ++k) {
            const double u = uniform01(seed, 3 * static_cast<std::uint64_t>(i) + k);
            x[k] = inverse_effective_coordinate(maps[k], ua[k] + u * (ub[k] - ua[k]));
        }
        const double v = f(x[0], x[1], x[2]);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(n - 1));
    return {volume * mean, std::fabs(volume) * se};
}

double gaussian_tail_bound(double D, double rmax) {
    // int_R^inf r^{D-1} e^{-r^2} dr <= R^{D-2} e^{-R^2} / (2 (1 - (D/2-1)/R^2))
    const double R2 = rmax * rmax;
    if (!(R2 > 0.5 * D - 1.0)) throw DomainError("gaussian_tail_bound: rmax too small");
    const double denom = 1.0 - std::max(0.0, 0.5 * D - 1.0) / R2;
    const double tail = std::pow(rmax, D - 2.0) * std::exp(-R2) / (2.0 * denom);
    return 2.0 * std::pow(M_PI, 0.5 * D) / gamma_fn(0.5 * D) * tail;
}

} // namespace fracdim
