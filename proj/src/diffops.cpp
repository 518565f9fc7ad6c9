#include "fracdim/diffops.hpp"

#include <algorithm>
#include <cmath>

namespace fracdim {
namespace {

double fd1_4th(const ScalarField& f, int k, double h, Point p) {
    const double x0 = p[static_cast<std::size_t>(k)];
    auto at = [&](double dx) {
        p[static_cast<std::size_t>(k)] = x0 + dx;
        return f(p);
    };
    return (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

double fd2_4th(const ScalarField& f, int k, double h, Point p) {
    const double x0 = p[static_cast<std::size_t>(k)];
    auto at = [&](double dx) {
        p[static_cast<std::size_t>(k)] = x0 + dx;
        return f(p);
    };
    return (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h)) /
           (12.0 * h * h);
}

double step_at(const LameFrame& frame, int k, const Point& p) {
    return frame.fd_step * std::max(1.0, std::fabs(p[static_cast<std::size_t>(k)]));
}

void require_off_plane(const LameFrame& frame, int k, const Point& p) {
    if (frame.alphas.axis(k).value() != 1.0 && p[static_cast<std::size_t>(k)] == 0.0)
        throw DomainError("operator is singular on the coordinate plane x_k = 0");
}

} // namespace

double LameFrame::lame(int k, const Point& p) const {
    return weight(WeightSpec::nids(alphas.axis(k)), p[static_cast<std::size_t>(k)]);
}

double LameFrame::jacobian(const Point& p) const {
    return lame(0, p) * lame(1, p) * lame(2, p);
}

double partial_classical(const ScalarField& f, int k, double h, const Point& p) {
    const double d_h = fd1_4th(f, k, h, p);
    const double d_h2 = fd1_4th(f, k, 0.5 * h, p);
    return d_h2 + (d_h2 - d_h) / 15.0; // one Richardson level on the O(h^4) stencil
}

double partial2_classical(const ScalarField& f, int k, double h, const Point& p) {
    const double d_h = fd2_4th(f, k, h, p);
    const double d_h2 = fd2_4th(f, k, 0.5 * h, p);
    return d_h2 + (d_h2 - d_h) / 15.0;
}

double partial_alpha(const ScalarField& f, int k, const LameFrame& frame, const Point& p) {
    require_off_plane(frame, k, p);
    return partial_classical(f, k, step_at(frame, k, p), p) / frame.lame(k, p);
}

VectorField grad_alpha(const ScalarField& f, const LameFrame& frame, bool covariant) {
    VectorField g;
    for (int k = 0; k < 3; ++k) {
        g.components[static_cast<std::size_t>(k)] = ScalarField([f, frame, k, covariant](const Point& p) {
            const double d = partial_alpha(f, k, frame, p);
            return covariant ? d / frame.lame(k, p) : d;
        });
    }
    return g;
}

ScalarField div_alpha(const VectorField& u, const LameFrame& frame) {
    return ScalarField([u, frame](const Point& p) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k)
            s += partial_alpha(u[k], k, frame, p);
        return s;
    });
}

VectorField curl_alpha(const VectorField& u, const LameFrame& frame) {
    VectorField c;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        c.components[static_cast<std::size_t>(i)] = ScalarField([u, frame, j, k](const Point& p) {
            return partial_alpha(u[k], j, frame, p) - partial_alpha(u[j], k, frame, p);
        });
    }
    return c;
}

ScalarField scalar_laplacian(const ScalarField& f, const LameFrame& frame) {
    return ScalarField([f, frame](const Point& p) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            require_off_plane(frame, k, p);
            const double a = frame.alphas.axis(k).value();
            const double x = p[static_cast<std::size_t>(k)];
            const double h = step_at(frame, k, p);
            const double d1 = partial_classical(f, k, h, p);
            const double d2 = partial2_classical(f, k, h, p);
            const double c1 = frame.lame(k, p);
            const double first = (a == 1.0) ? 0.0 : (a - 1.0) / x * d1;
            s += (d2 - first) / (c1 * c1);
        }
        return s;
    });
}

VectorField vector_laplacian(const VectorField& u, const LameFrame& frame) {
    const ScalarField d = div_alpha(u, frame);
    const VectorField gd = grad_alpha(d, frame);
    const VectorField cc = curl_alpha(curl_alpha(u, frame), frame);
    VectorField out;
    for (int k = 0; k < 3; ++k) {
        const ScalarField& g = gd[k];
        const ScalarField& c = cc[k];
        out.components[static_cast<std::size_t>(k)] =
            ScalarField([g, c](const Point& p) { return g(p) - c(p); });
    }
    return out;
}

ScalarField laplace_beltrami(const ScalarField& f, const LameFrame& frame) {
    // (1/sqrt g) d_k ( sqrt g g^{kk} d_k f ) with sqrt g = H1 H2 H3.
    return ScalarField([f, frame](const Point& p) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            require_off_plane(frame, k, p);
            ScalarField flux([f, frame, k](const Point& q) {
                const double J = frame.jacobian(q);
                const double Hk = frame.lame(k, q);
                return J / (Hk * Hk) * partial_classical(f, k, step_at(frame, k, q), q);
            });
            s += partial_classical(flux, k, step_at(frame, k, p), p) / frame.jacobian(p);
        }
        return s;
    });
}

std::vector<double> grid_axis_coords(const Grid3& grid, int axis, const MultiIndex& alphas) {
    const GridAxis& ax = grid.axes[static_cast<std::size_t>(axis)];
    if (ax.nodes < 3) throw DomainError("grid axis needs at least 3 nodes");
    if (alphas.axis(axis).value() != 1.0 && ax.a <= 0.0)
        throw DomainError("grid must exclude the coordinate plane (a_k > 0) for alpha_k != 1");
    std::vector<double> x(static_cast<std::size_t>(ax.nodes));
    if (grid.spacing == Spacing::UniformPhysical) {
        for (int i = 0; i < ax.nodes; ++i)
            x[static_cast<std::size_t>(i)] = ax.a + (ax.b - ax.a) * i / (ax.nodes - 1);
    } else {
        const EffectiveCoordinateMap map{alphas.axis(axis), CoordinateVariant::X};
        const double Xa = effective_coordinate(map, ax.a);
        const double Xb = effective_coordinate(map, ax.b);
        for (int i = 0; i < ax.nodes; ++i)
            x[static_cast<std::size_t>(i)] =
                inverse_effective_coordinate(map, Xa + (Xb - Xa) * i / (ax.nodes - 1));
    }
    return x;
}

std::vector<double> sample_grid(const ScalarField& f, const Grid3& grid,
                                const MultiIndex& alphas) {
    std::array<std::vector<double>, 3> coords;
    for (int k = 0; k < 3; ++k)
        coords[static_cast<std::size_t>(k)] = grid_axis_coords(grid, k, alphas);
    std::vector<double> out;
    out.reserve(coords[0].size() * coords[1].size() * coords[2].size());
    for (double x1 : coords[0])
        for (double x2 : coords[1])
            for (double x3 : coords[2])
                out.push_back(f(x1, x2, x3));
    return out;
}

std::vector<double> grid_partial_alpha(const std::vector<double>& values, const Grid3& grid,
                                       int axis, const MultiIndex& alphas) {
    const int n1 = grid.axes[0].nodes, n2 = grid.axes[1].nodes, n3 = grid.axes[2].nodes;
    if (values.size() != static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
                             static_cast<std::size_t>(n3))
        throw DomainError("grid_partial_alpha: value array does not match grid");

    // Effective coordinates of the nodes along the differentiation axis;
    // uniform for UniformEffective grids, graded for UniformPhysical ones.
    const auto x = grid_axis_coords(grid, axis, alphas);
    const EffectiveCoordinateMap map{alphas.axis(axis), CoordinateVariant::X};
    std::vector<double> X(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) X[i] = effective_coordinate(map, x[i]);

    const int n[3] = {n1, n2, n3};
    const int stride[3] = {n2 * n3, n3, 1};
    const int na = n[axis];
    std::vector<double> out(values.size());

    auto d_line = [&](std::size_t base) {
        for (int i = 0; i < na; ++i) {
            // 3-point stencil exact for quadratics, one-sided at the ends
            int j0 = std::clamp(i - 1, 0, na - 3);
            const double xa = X[static_cast<std::size_t>(j0)], xb = X[static_cast<std::size_t>(j0) + 1],
                         xc = X[static_cast<std::size_t>(j0) + 2];
            const double fa = values[base + static_cast<std::size_t>(j0 * stride[axis])],
                         fb = values[base + static_cast<std::size_t>((j0 + 1) * stride[axis])],
                         fc = values[base + static_cast<std::size_t>((j0 + 2) * stride[axis])];
            const double xi = X[static_cast<std::size_t>(i)];
            // derivative of the quadratic through (xa,fa),(xb,fb),(xc,fc) at xi
            const double d = fa * (2.0 * xi - xb - xc) / ((xa - xb) * (xa - xc)) +
                             fb * (2.0 * xi - xa - xc) / ((xb - xa) * (xb - xc)) +
                             fc * (2.0 * xi - xa - xb) / ((xc - xa) * (xc - xb));
            out[base + static_cast<std::size_t>(i * stride[axis])] = d;
        }
    };

    const int ob = (axis + 1) % 3, oc = (axis + 2) % 3;
    for (int b = 0; b < n[ob]; ++b)
        for (int c = 0; c < n[oc]; ++c)
            d_line(static_cast<std::size_t>(b * stride[ob] + c * stride[oc]));
    return out;
}

} // namespace fracdim
