#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracdim/beam.hpp"
#include "fracdim/errors.hpp"

using namespace fracdim;

namespace {

constexpr double kPi = 3.14159265358979323846;

BeamConfig unit_beam(double alpha, double L = 1.0) {
    return {1.0, 1.0, 1.0, 1.0, 5.0 / 6.0, 1.0, L, AxisDimension(alpha)};
}

// Fully independent bisection on the literal characteristic function,
// evaluated in the bounded form cos z + sech z.
double oracle_root(int m) {
    // sech z is a small positive perturbation of cos z, so the m-th root sits
    // in the half-period below m*pi (odd m) or below (m-1/2)*pi (even m).
    double lo = (m % 2 == 1) ? (m - 0.5) * kPi : (m - 1.0) * kPi;
    double hi = (m % 2 == 1) ? m * kPi : (m - 0.5) * kPi;
    auto f = [](double z) { return std::cos(z) + 1.0 / std::cosh(z); };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("BeamConfig validation") {
    CHECK_THROWS_AS(BeamConfig({-1.0, 1, 1, 1, 1, 1, 1, AxisDimension(1.0)}).validate(),
                    DomainError);
    CHECK_THROWS_AS(unit_beam(1.6).validate(), InvalidDimension);
    CHECK_NOTHROW(unit_beam(0.8).validate());
}

TEST_CASE("characteristic roots: classical values, asymptote, residual") {
    auto z = characteristic_root_arguments(10);
    CHECK(z[0] == doctest::Approx(1.875104).epsilon(1e-6));
    CHECK(z[1] == doctest::Approx(4.694091).epsilon(1e-6));
    CHECK(z[2] == doctest::Approx(7.854757).epsilon(1e-6));
    CHECK(std::fabs(z[9] - 9.5 * kPi) <= 1e-3);
    for (int n = 0; n < 10; ++n) {
        CHECK(z[static_cast<std::size_t>(n)] ==
              doctest::Approx(oracle_root(n + 1)).epsilon(1e-13));
        // residual of the characteristic equation in its bounded form
        // cos z + sech z (the literal product cosh*cos + 1 carries an e^z/2
        // magnification that makes 1e-12 unattainable in double for n >= 5)
        const double zi = z[static_cast<std::size_t>(n)];
        CHECK(std::fabs(std::cos(zi) + 1.0 / std::cosh(zi)) <= 1e-12);
    }
    // strictly increasing
    for (int n = 1; n < 10; ++n)
        CHECK(z[static_cast<std::size_t>(n)] > z[static_cast<std::size_t>(n - 1)]);
}

TEST_CASE("roots scale with the effective length; alpha = 1 is classical") {
    auto cfg1 = unit_beam(1.0);
    auto k1 = characteristic_roots(cfg1, 3);
    auto z = characteristic_root_arguments(3);
    for (int i = 0; i < 3; ++i)
        CHECK(k1[static_cast<std::size_t>(i)] ==
              doctest::Approx(z[static_cast<std::size_t>(i)]).epsilon(1e-14));

    // two configs with equal effective length have identical spectra
    auto cfg08 = unit_beam(0.8, 2.0);
    const double lambda = effective_length(cfg08);
    BeamConfig cfg_match = unit_beam(1.0, lambda);
    auto ka = characteristic_roots(cfg08, 4);
    auto kb = characteristic_roots(cfg_match, 4);
    for (int i = 0; i < 4; ++i)
        CHECK(ka[static_cast<std::size_t>(i)] ==
              doctest::Approx(kb[static_cast<std::size_t>(i)]).epsilon(1e-13));
}

TEST_CASE("natural frequencies") {
    auto cfg = unit_beam(1.0);
    auto k = characteristic_roots(cfg, 5);
    auto w = natural_frequencies(cfg, k);
    CHECK(w[0] == doctest::Approx(3.51602).epsilon(1e-5));
    for (int i = 1; i < 5; ++i) {
        CHECK(w[static_cast<std::size_t>(i)] > w[static_cast<std::size_t>(i - 1)]);
        CHECK(w[static_cast<std::size_t>(i)] / w[0] ==
              doctest::Approx(std::pow(k[static_cast<std::size_t>(i)] / k[0], 2.0))
                  .epsilon(1e-12));
    }
    BeamConfig stiff = cfg;
    stiff.E = 2.0;
    auto w2 = natural_frequencies(stiff, characteristic_roots(stiff, 5));
    for (int i = 0; i < 5; ++i)
        CHECK(w2[static_cast<std::size_t>(i)] / w[static_cast<std::size_t>(i)] ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("mode shapes: clamped end, classical match, composition law") {
    auto cfg = unit_beam(1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i / 40.0);
    auto mode = mode_shape(cfg, 1, grid);
    CHECK(mode.shape.front() == 0.0);

    // classical closed form recomputed directly
    const double k = mode.root, C = mode.shape_constant;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xv = grid[i];
        const double classical = std::cosh(k * xv) - std::cos(k * xv) +
                                 C * (std::sin(k * xv) - std::sinh(k * xv));
        CHECK(mode.shape[i] == doctest::Approx(classical).epsilon(1e-10));
    }

    // alpha = 0.8 with L adjusted to the same effective length gives the
    // alpha = 1 shape composed with X(x)
    BeamConfig cfg08 = unit_beam(0.8);
    cfg08.L = inverse_effective_coordinate({AxisDimension(0.8), CoordinateVariant::X}, 1.0);
    CHECK(effective_length(cfg08) == doctest::Approx(1.0).epsilon(1e-13));
    std::vector<double> grid08;
    const EffectiveCoordinateMap map{AxisDimension(0.8), CoordinateVariant::X};
    for (double chi : grid) grid08.push_back(inverse_effective_coordinate(map, chi));
    auto mode08 = mode_shape(cfg08, 2, grid08);
    auto mode1 = mode_shape(cfg, 2, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(mode08.shape[i] == doctest::Approx(mode1.shape[i]).epsilon(1e-10));
}

TEST_CASE("boundary residuals and modal orthogonality") {
    for (double alpha : {0.8, 1.0}) {
        auto cfg = unit_beam(alpha, 2.0);
        for (int n = 1; n <= 6; ++n) {
            auto r = mode_boundary_residuals(cfg, n);
            for (double v : r) CHECK(v <= 1e-6);
        }
        for (int m = 1; m <= 4; ++m)
            for (int n = m + 1; n <= 4; ++n) CHECK(modal_inner_product(cfg, m, n) <= 1e-6);
    }
}

TEST_CASE("transfer_solution and the dynamic beam equation") {
    // alpha = 1: identity transfer
    auto f = transfer_solution([](double c, double t) { return c * c + t; }, AxisDimension(1.0));
    CHECK(f(1.3, 0.5) == doctest::Approx(1.3 * 1.3 + 0.5).epsilon(1e-14));

    // transferred Euler-Bernoulli modes satisfy the dynamic equation
    BeamConfig cfg = unit_beam(0.8, 8.0);
    const double lambda = effective_length(cfg);
    auto z = characteristic_root_arguments(4);
    for (int n = 1; n <= 4; ++n) {
        const double k = z[static_cast<std::size_t>(n) - 1] / lambda;
        const double omega = k * k; // E = I_d = rho = A = 1
        SpaceTimeFn classical = [=](double chi, double t) {
            return cantilever_shape(k, lambda, chi) * std::cos(omega * t);
        };
        auto w = transfer_solution(classical, cfg.alpha);
        const double res =
            euler_bernoulli_residual(w, cfg, 0.02 / k, 0.02 / omega, 2.0 * kPi / omega);
        CHECK(res <= 1e-5);
        // sensitivity: a wrong frequency must be flagged loudly
        SpaceTimeFn wrong = [=](double chi, double t) {
            return cantilever_shape(k, lambda, chi) * std::cos(1.1 * omega * t);
        };
        const double bad = euler_bernoulli_residual(transfer_solution(wrong, cfg.alpha), cfg,
                                                    0.02 / k, 0.02 / omega, 2.0 * kPi / omega);
        CHECK(bad > 10.0 * res);
    }
    // w == 0 gives zero residual
    CHECK(euler_bernoulli_residual([](double, double) { return 0.0; }, cfg, 1e-2, 1e-2) == 0.0);
}

TEST_CASE("Timoshenko: trivial states and energy accounting") {
    auto cfg = unit_beam(0.8, 2.0);
    TimoshenkoSimulator sim(cfg, 60);
    auto e0 = sim.energy();
    CHECK(e0.total() == 0.0);
    sim.run(50, 1e-3);
    for (int i = 0; i < sim.nodes(); ++i) {
        CHECK(sim.w(i) == 0.0);
        CHECK(sim.phi(i) == 0.0);
    }

    // rigid transverse motion: w = const * velocity only -> kinetic energy only
    TimoshenkoSimulator rigid(cfg, 60);
    rigid.set_initial(nullptr, nullptr, [](double) { return 0.7; }, nullptr);
    auto er = rigid.energy();
    CHECK(er.bending == 0.0);
    CHECK(er.shear == 0.0);
    const double lambda = effective_length(cfg);
    // lumped mass excludes the clamped node's half cell
    CHECK(er.kinetic ==
          doctest::Approx(0.5 * 0.7 * 0.7 * (lambda - 0.5 * lambda / 59.0)).epsilon(1e-12));
}

TEST_CASE("Timoshenko: eigen-oracle, conservation, stationary action") {
    auto cfg = unit_beam(1.0, 1.0);
    const int nodes = 400;
    TimoshenkoSimulator sim(cfg, nodes);
    auto freqs = sim.eigenfrequencies(3);
    REQUIRE(freqs.size() == 3);

    // small-amplitude free vibration of the first discrete mode
    const double lambda = effective_length(cfg);
    const double k1 = characteristic_root_arguments(1)[0] / lambda;
    sim.set_initial([&](double x) { return 1e-3 * cantilever_shape(k1, lambda, x); },
                    [&](double x) { return 1e-3 * cantilever_shape(k1, lambda, x, 1); });
    CHECK(sim.stationary_action_residual() <= 1e-10);

    const double e0 = sim.energy().total();
    CHECK(e0 > 0.0);
    const double T = 2.0 * kPi / freqs[0];
    const double dt = T / 400.0;

    // measure the mean period across ten tip-deflection upcrossings; the
    // initial shape is not a pure discrete mode, so averaging suppresses the
    // phase jitter contributed by higher modes
    double prev = sim.w(nodes - 1);
    double first = -1.0, last = -1.0;
    int crossings = 0;
    for (int s = 1; s <= 100000 && crossings < 11; ++s) {
        sim.step(dt);
        const double cur = sim.w(nodes - 1);
        if (prev < 0.0 && cur >= 0.0) {
            const double t = s * dt - dt * cur / (cur - prev);
            if (first < 0.0) first = t;
            last = t;
            ++crossings;
        }
        prev = cur;
    }
    REQUIRE(crossings == 11);
    const double omega_measured = 2.0 * kPi / ((last - first) / 10.0);
    CHECK(omega_measured == doctest::Approx(freqs[0]).epsilon(0.01));

    // undamped energy conservation over 10^4 steps
    TimoshenkoSimulator cons(cfg, 100);
    cons.set_initial([&](double x) { return cantilever_shape(k1, lambda, x); },
                     [&](double x) { return cantilever_shape(k1, lambda, x, 1); });
    const double ec0 = cons.energy().total();
    cons.run(10000, T / 200.0);
    CHECK(std::fabs(cons.energy().total() - ec0) <= 1e-3 * ec0);
}

TEST_CASE("Timoshenko: fractal run equals transferred classical run") {
    // An alpha = 0.8 beam and the alpha = 1 beam of length Lambda describe
    // the same dynamics; the transfer map carries one tip history onto the other.
    BeamConfig frac = unit_beam(0.8, 2.0);
    const double lambda = effective_length(frac);
    BeamConfig classical = unit_beam(1.0, lambda);

    const int nodes = 400;
    TimoshenkoSimulator sim_f(frac, nodes);
    TimoshenkoSimulator sim_c(classical, nodes);
    const double k1 = characteristic_root_arguments(1)[0] / lambda;
    auto shape_c = [&](double chi) { return 1e-2 * cantilever_shape(k1, lambda, chi); };
    const EffectiveCoordinateMap map{frac.alpha, CoordinateVariant::X};
    sim_c.set_initial(shape_c, nullptr);
    sim_f.set_initial([&](double x) { return shape_c(effective_coordinate(map, x)); }, nullptr);

    const double T = 2.0 * kPi / sim_c.eigenfrequencies(1)[0];
    const double dt = T / 2000.0;
    double scale = 0.0, worst = 0.0;
    for (int s = 0; s < 2000; ++s) {
        sim_f.step(dt);
        sim_c.step(dt);
        scale = std::max(scale, std::fabs(sim_c.w(nodes - 1)));
        worst = std::max(worst, std::fabs(sim_f.w(nodes - 1) - sim_c.w(nodes - 1)));
    }
    CHECK(worst <= 0.01 * scale);

    // physical node positions differ; effective positions coincide
    CHECK(sim_f.chi(nodes - 1) == doctest::Approx(sim_c.chi(nodes - 1)).epsilon(1e-12));
    CHECK(sim_f.x(nodes - 1) == doctest::Approx(2.0).epsilon(1e-10));

    CHECK_THROWS_AS(sim_f.step(0.0), DomainError);
}

TEST_CASE("simulation convergence is second order") {
    auto cfg = unit_beam(1.0, 1.0);
    const double lambda = 1.0;
    const double k1 = characteristic_root_arguments(1)[0];

    // spatial order: the fundamental discrete eigenfrequency converges at
    // O(dx^2) toward the continuum value
    auto f1 = [&](int n) { return TimoshenkoSimulator(cfg, n).eigenfrequencies(1)[0]; };
    const double fr = f1(401);
    const double s1 = std::fabs(f1(51) - fr);
    const double s2 = std::fabs(f1(101) - fr);
    CHECK(s1 / s2 >= 3.5);

    // temporal order: on a grid coarse enough that every discrete mode is
    // resolved at the tested steps, halving dt quarters the tip error
    auto tip_at = [&](int steps) {
        TimoshenkoSimulator sim(cfg, 21);
        sim.set_initial([&](double x) { return cantilever_shape(k1, lambda, x); }, nullptr);
        sim.run(steps, 1.0 / steps);
        return sim.w(sim.nodes() - 1);
    };
    const double ref = tip_at(12800);
    const double e1 = std::fabs(tip_at(200) - ref);
    const double e2 = std::fabs(tip_at(400) - ref);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}
