#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "fracdim/measure.hpp"

namespace fracdim {

/// Material and geometry of a fractal cantilever beam. The axial axis has
/// dimension alpha; the cross-section enters only through the scalar second
/// moment I_d.
struct BeamConfig {
    double rho;         // mass density
    double A;           // cross-section area
    double E;           // Young modulus
    double I_d;         // second moment of the fractal cross-section
    double kappa_shear; // Timoshenko shear coefficient
    double G;           // shear modulus
    double L;           // length
    AxisDimension alpha;
    // When set, characteristic roots and mode shapes use the verbatim
    // published forms (argument k x^alpha, frequency equation in k L)
    // instead of the effective-coordinate convention chi = X(x).
    bool paper_literal = false;

    void validate() const;
};

struct ModalResult {
    int index;             // n, 1-based
    double root;           // k_n
    double frequency;      // omega_n
    double shape_constant; // C_n
    std::vector<double> x;
    std::vector<double> shape; // w_n(x) on the grid above
    double w0 = 1.0;
};

/// Effective length Lambda: the beam length in the effective coordinate,
/// X(L) (or L^alpha in paper-literal mode).
double effective_length(const BeamConfig& config);

/// First `count` positive roots z_n of cosh(z)cos(z) + 1 = 0.
std::vector<double> characteristic_root_arguments(int count);

/// k_n = z_n / Lambda for the first `count` modes.
std::vector<double> characteristic_roots(const BeamConfig& config, int count);

/// omega_n = k_n^2 sqrt(E I_d / (rho A)).
std::vector<double> natural_frequencies(const BeamConfig& config,
                                        const std::vector<double>& roots);

/// Clamped-free shape in the effective coordinate,
///   w(chi) = cosh(k chi) - cos(k chi) + C (sin(k chi) - sinh(k chi)),
/// with C = (cos(k Lambda) + cosh(k Lambda)) / (sin(k Lambda) + sinh(k Lambda)),
/// evaluated in a cancellation-free rearrangement; deriv selects d^m/dchi^m
/// for m = 0..3.
double cantilever_shape(double k, double lambda, double chi, int deriv = 0);

/// C_n for the given root.
double shape_constant(double k, double lambda);

/// Full modal data for mode n sampled at the physical grid points.
ModalResult mode_shape(const BeamConfig& config, int n, const std::vector<double>& grid_x);

/// The four clamped-free boundary residuals
///   |w(0)|, |w'(0)|, |w''(Lambda)|, |w'''(Lambda)|
/// (derivatives with respect to the effective coordinate), normalized by
/// max |w| over the mode.
std::array<double, 4> mode_boundary_residuals(const BeamConfig& config, int n);

/// Normalized modal inner product  |int_0^Lambda w_m w_n dX| / (|w_m| |w_n|).
double modal_inner_product(const BeamConfig& config, int m, int n);

/// Modal mass  int_0^Lambda w_n^2 dX.
double modal_mass(const BeamConfig& config, int n);

using SpaceTimeFn = std::function<double(double, double)>;

/// Lift a solution of the integer-dimensional beam equations to dimension
/// alpha: w_F(x, t) = classical(X(alpha, x), t).
SpaceTimeFn transfer_solution(const SpaceTimeFn& classical, AxisDimension alpha);

/// Max residual of  rho A w_tt + E I_d w_xxxx  (fourth derivative taken with
/// respect to the effective coordinate) over an nx-by-nt sample grid covering
/// x in [0.25 L, 0.9 L] and t in [0, t_max]. chi_step and t_step are the
/// finite-difference steps; pass roughly 0.01/k_n and 0.02/omega_n for a
/// near-modal field.
double euler_bernoulli_residual(const SpaceTimeFn& w, const BeamConfig& config,
                                double chi_step, double t_step, double t_max = 1.0,
                                int nx = 9, int nt = 5);

/// Timoshenko cantilever dynamics on a grid uniform in the effective
/// coordinate, where the fractal equations take their classical form. The
/// discretization is the discrete Lagrangian of the beam (element shear and
/// bending strains, lumped masses), advanced by Newmark-beta (1/4, 1/2).
class TimoshenkoSimulator {
public:
    struct Energy {
        double kinetic = 0.0, bending = 0.0, shear = 0.0;
        double total() const { return kinetic + bending + shear; }
    };

    TimoshenkoSimulator(const BeamConfig& config, int nodes);
    ~TimoshenkoSimulator();
    TimoshenkoSimulator(const TimoshenkoSimulator&) = delete;
    TimoshenkoSimulator& operator=(const TimoshenkoSimulator&) = delete;

    /// Initial fields as functions of the physical coordinate x.
    void set_initial(const std::function<double(double)>& w,
                     const std::function<double(double)>& phi,
                     const std::function<double(double)>& w_dot = nullptr,
                     const std::function<double(double)>& phi_dot = nullptr);

    void step(double dt);
    /// Advance `steps` steps of size dt; throws StabilityViolation if the
    /// total energy of this (undamped) system grows by more than 0.1% over
    /// any 1000-step window.
    void run(int steps, double dt);

    int nodes() const { return nodes_; }
    double time() const { return t_; }
    double chi(int i) const;
    double x(int i) const;
    double w(int i) const;
    double phi(int i) const;
    double w_dot(int i) const;
    double phi_dot(int i) const;

    Energy energy() const;

    /// Angular frequencies of the first `count` modes of the same spatial
    /// discretization, from a dense generalized symmetric eigensolve.
    std::vector<double> eigenfrequencies(int count) const;

    /// Max deviation (relative to the force scale) between the assembled
    /// stiffness force K u and a central-difference gradient of the discrete
    /// potential at the current state.
    double stationary_action_residual() const;

private:
    struct Impl;
    BeamConfig config_;
    int nodes_;
    double lambda_, delta_, t_ = 0.0;
    std::unique_ptr<Impl> impl_;
};

} // namespace fracdim
