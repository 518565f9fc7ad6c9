#include "fracdim/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "fracdim/gamma.hpp"

namespace fracdim {
namespace {

// Composite Gauss-Legendre on [a, x] with a fixed panel structure that
// varies smoothly with x (so FD differentiation of the result is clean).
double cumulative_gl(const RealFn& g, double a, double x, int nodes = 16, int panels = 12) {
    if (x == a) return 0.0;
    static thread_local std::vector<double> gx, gw;
    if (gx.size() != static_cast<std::size_t>(nodes)) {
        // fetch nodes once via a throwaway unweighted integral setup
        gx.resize(static_cast<std::size_t>(nodes));
        gw.resize(static_cast<std::size_t>(nodes));
        // Newton iteration, same as the quadrature module's rule
        for (int i = 0; i < (nodes + 1) / 2; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (nodes + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= nodes; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nodes * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - t * t) * dp * dp);
            gx[static_cast<std::size_t>(i)] = -t;
            gw[static_cast<std::size_t>(i)] = w;
            gx[static_cast<std::size_t>(nodes - 1 - i)] = t;
            gw[static_cast<std::size_t>(nodes - 1 - i)] = w;
        }
    }
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + (x - a) * p / panels;
        const double hi = a + (x - a) * (p + 1) / panels;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i)
            s += gw[static_cast<std::size_t>(i)] * g(mid + half * gx[static_cast<std::size_t>(i)]);
        sum += half * s;
    }
    return sum;
}

double news_c1_sq(double alpha, double x) {
    const double c = std::pow(M_PI, 0.5 * alpha) / gamma_fn(0.5 * alpha) *
                     std::pow(std::fabs(x), alpha - 1.0);
    return c * c;
}

// Natural cubic spline through (x_i, y_i); evaluates (and extrapolates with
// the end cubic) anywhere.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
        const std::size_t n = x_.size();
        std::vector<double> diag(n, 2.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            sub[i] = hl / (hl + hr);
            sup[i] = hr / (hl + hr);
            rhs[i] = 6.0 / (hl + hr) *
                     ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
        }
        // natural ends: m_0 = m_{n-1} = 0; Thomas elimination
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (rhs[i] - sup[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / diag[i];
            if (i == 1) break;
        }
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        std::size_t i = 1;
        if (x <= x_[1]) i = 1;
        else if (x >= x_[n - 2]) i = n - 1;
        else {
            std::size_t lo = 1, hi = n - 1;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (x < x_[mid] ? hi : lo) = mid;
            }
            i = hi;
        }
        const double h = x_[i] - x_[i - 1];
        const double A = (x_[i] - x) / h, B = (x - x_[i - 1]) / h;
        return A * y_[i - 1] + B * y_[i] +
               ((A * A * A - A) * m_[i - 1] + (B * B * B - B) * m_[i]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i >= 1; --i)
        rhs[i - 1] = (rhs[i - 1] - sup[i - 1] * rhs[i]) / diag[i - 1];
}

} // namespace

std::pair<RealFn, RealFn> poisson_homogeneous_basis(PoissonOperator op, AxisDimension alpha) {
    const double a = alpha.value();
    if (op == PoissonOperator::NEWS)
        return {[](double) { return 1.0; },
                [a](double x) { return std::pow(x, a); }};
    return {[a](double x) { return std::pow(x, 0.5 * (3.0 - a)); },
            [a](double x) { return std::pow(x, 0.5 * (1.0 - a)); }};
}

double apply_poisson_operator(PoissonOperator op, AxisDimension alpha, const RealFn& phi,
                              double x) {
    if (!(x > 0.0)) throw DomainError("Poisson operators act on x > 0");
    const double a = alpha.value();
    const double h = std::max(1e-2 * x, 1e-5);
    auto d1_at = [&](double step) {
        return (8.0 * (phi(x + step) - phi(x - step)) - (phi(x + 2.0 * step) - phi(x - 2.0 * step))) /
               (12.0 * step);
    };
    auto d2_at = [&](double step) {
        return (-phi(x + 2.0 * step) + 16.0 * phi(x + step) - 30.0 * phi(x) +
                16.0 * phi(x - step) - phi(x - 2.0 * step)) /
               (12.0 * step * step);
    };
    const double d1 = d1_at(0.5 * h) + (d1_at(0.5 * h) - d1_at(h)) / 15.0;
    const double d2 = d2_at(0.5 * h) + (d2_at(0.5 * h) - d2_at(h)) / 15.0;
    if (op == PoissonOperator::NEWS)
        return (d2 - (a - 1.0) / x * d1) / news_c1_sq(a, x);
    return d2 + (a - 1.0) / x * d1 + (a - 1.0) * (a - 3.0) / (4.0 * x * x) * phi(x);
}

double poisson_residual(PoissonOperator op, AxisDimension alpha, const RealFn& phi,
                        const RealFn& f, double a, double b, int n) {
    double worst = 0.0;
    const double margin = 5e-3 * (b - a);
    for (int i = 0; i < n; ++i) {
        const double x = (a + margin) + (b - a - 2.0 * margin) * i / (n - 1);
        worst = std::max(worst, std::fabs(apply_poisson_operator(op, alpha, phi, x) - f(x)));
    }
    return worst;
}

PoissonSolution poisson_solve_analytic(const PoissonProblem& problem) {
    const double a = problem.a, b = problem.b;
    if (!(a > 0.0 && b > a)) throw DomainError("Poisson interval must satisfy 0 < a < b");
    const double al = problem.alpha.value();
    auto [h1, h2] = poisson_homogeneous_basis(problem.op, problem.alpha);

    // Standard form phi'' + P phi' + Q phi = R; the NEWS weight moves to the rhs.
    RealFn rhs;
    RealFn wronskian;
    if (problem.op == PoissonOperator::NEWS) {
        rhs = [f = problem.f, al](double x) { return news_c1_sq(al, x) * f(x); };
        wronskian = [al](double x) { return al * std::pow(x, al - 1.0); };
    } else {
        rhs = problem.f;
        wronskian = [al](double x) { return -std::pow(x, 1.0 - al); };
    }

    auto g1 = [=](double x) { return h2(x) * rhs(x) / wronskian(x); };
    auto g2 = [=](double x) { return h1(x) * rhs(x) / wronskian(x); };
    auto particular = [=](double x) {
        return -h1(x) * cumulative_gl(g1, a, x) + h2(x) * cumulative_gl(g2, a, x);
    };

    // Fit C1 h1 + C2 h2 to the Dirichlet values (particular vanishes at a).
    const double m11 = h1(a), m12 = h2(a);
    const double m21 = h1(b), m22 = h2(b);
    const double det = m11 * m22 - m12 * m21;
    const double norm = std::sqrt(m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22);
    if (std::fabs(det) < 1e-13 * norm * norm) {
        // condition estimate from the Frobenius norm and determinant
        const double cond = norm * norm / std::max(std::fabs(det), 1e-300);
        throw SingularBoundarySystem("boundary-condition system is rank-deficient", cond);
    }
    const double r1 = problem.phi_a;
    const double r2 = problem.phi_b - particular(b);
    const double C1 = (r1 * m22 - r2 * m12) / det;
    const double C2 = (m11 * r2 - m21 * r1) / det;

    PoissonSolution sol;
    sol.C1 = C1;
    sol.C2 = C2;
    sol.phi = [=](double x) { return C1 * h1(x) + C2 * h2(x) + particular(x); };
    sol.residual_norm =
        poisson_residual(problem.op, problem.alpha, sol.phi, problem.f, a, b, 200);
    return sol;
}

namespace {

// One FD pass; returns node values at `nodes` points (inclusive ends).
std::vector<double> numeric_pass(const PoissonProblem& p, int nodes,
                                 std::vector<double>& coords_out) {
    const double al = p.alpha.value();
    std::vector<double> sub(static_cast<std::size_t>(nodes), 0.0),
        diag(static_cast<std::size_t>(nodes), 1.0), sup(static_cast<std::size_t>(nodes), 0.0),
        rhs(static_cast<std::size_t>(nodes), 0.0);

    if (p.op == PoissonOperator::NEWS) {
        const EffectiveCoordinateMap map{p.alpha, CoordinateVariant::X};
        const double ua = effective_coordinate(map, p.a);
        const double ub = effective_coordinate(map, p.b);
        const double h = (ub - ua) / (nodes - 1);
        coords_out.resize(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i)
            coords_out[static_cast<std::size_t>(i)] = ua + h * i;
        rhs[0] = p.phi_a;
        rhs[static_cast<std::size_t>(nodes) - 1] = p.phi_b;
        for (int i = 1; i + 1 < nodes; ++i) {
            const double x = inverse_effective_coordinate(map, coords_out[static_cast<std::size_t>(i)]);
            sub[static_cast<std::size_t>(i)] = 1.0;
            diag[static_cast<std::size_t>(i)] = -2.0;
            sup[static_cast<std::size_t>(i)] = 1.0;
            rhs[static_cast<std::size_t>(i)] = h * h * p.f(x);
        }
    } else {
        const double h = (p.b - p.a) / (nodes - 1);
        coords_out.resize(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i)
            coords_out[static_cast<std::size_t>(i)] = p.a + h * i;
        rhs[0] = p.phi_a;
        rhs[static_cast<std::size_t>(nodes) - 1] = p.phi_b;
        for (int i = 1; i + 1 < nodes; ++i) {
            const double x = coords_out[static_cast<std::size_t>(i)];
            const double P = (al - 1.0) / x;
            const double Q = (al - 1.0) * (al - 3.0) / (4.0 * x * x);
            sub[static_cast<std::size_t>(i)] = 1.0 / (h * h) - P / (2.0 * h);
            diag[static_cast<std::size_t>(i)] = -2.0 / (h * h) + Q;
            sup[static_cast<std::size_t>(i)] = 1.0 / (h * h) + P / (2.0 * h);
            rhs[static_cast<std::size_t>(i)] = p.f(x);
        }
    }
    solve_tridiagonal(sub, diag, sup, rhs);
    return rhs;
}

} // namespace

PoissonSolution poisson_solve_numeric(const PoissonProblem& problem, int nodes) {
    if (nodes < 5) throw DomainError("poisson_solve_numeric: need at least 5 nodes");
    if (!(problem.a > 0.0 && problem.b > problem.a))
        throw DomainError("Poisson interval must satisfy 0 < a < b");

    std::vector<double> grid_fine, grid_coarse;
    auto fine = numeric_pass(problem, 2 * nodes - 1, grid_fine);
    auto coarse = numeric_pass(problem, nodes, grid_coarse);
    double err = 0.0;
    for (int i = 0; i < nodes; ++i)
        err = std::max(err, std::fabs(fine[static_cast<std::size_t>(2 * i)] -
                                      coarse[static_cast<std::size_t>(i)]));
    err *= 4.0 / 3.0; // second-order Richardson factor
    if (err > 1e-4)
        throw GridTooCoarse("poisson_solve_numeric: estimated error above 1e-4", err);

    auto spline = std::make_shared<CubicSpline>(grid_fine, fine);
    PoissonSolution sol;
    if (problem.op == PoissonOperator::NEWS) {
        const EffectiveCoordinateMap map{problem.alpha, CoordinateVariant::X};
        sol.phi = [spline, map](double x) { return (*spline)(effective_coordinate(map, x)); };
    } else {
        sol.phi = [spline](double x) { return (*spline)(x); };
    }
    sol.C1 = std::numeric_limits<double>::quiet_NaN(); // analytic path only
    sol.C2 = std::numeric_limits<double>::quiet_NaN();
    sol.residual_norm = poisson_residual(problem.op, problem.alpha, sol.phi, problem.f,
                                         problem.a, problem.b, 200);
    return sol;
}

RealFn news_reference_particular(AxisDimension alpha, const RealFn& f, double anchor) {
    const double al = alpha.value();
    const double g = gamma_fn(0.5 * al);
    const double pref = std::pow(M_PI, al) / (al * g * g);
    return [=](double x) {
        auto i1 = [&](double t) { return f(t) * std::pow(t, 2.0 * al - 1.0); };
        auto i2 = [&](double t) { return f(t) * std::pow(t, al - 1.0); };
        return -pref * (cumulative_gl(i1, anchor, x) -
                        std::pow(x, al) * cumulative_gl(i2, anchor, x));
    };
}

} // namespace fracdim
