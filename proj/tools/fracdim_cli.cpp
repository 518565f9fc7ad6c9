// fracdim command-line front end: measures, integrals, operator checks,
// Poisson solves, beam analysis, and a deterministic validation suite.
//
// Exit codes: 0 success, 2 argument validation, 3 numerical failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracdim/alt_operators.hpp"
#include "fracdim/beam.hpp"
#include "fracdim/diffops.hpp"
#include "fracdim/errors.hpp"
#include "fracdim/gamma.hpp"
#include "fracdim/measure.hpp"
#include "fracdim/poisson.hpp"
#include "fracdim/quadrature.hpp"

using json = nlohmann::ordered_json;
using namespace fracdim;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// logging (FRACDIM_LOG = debug|info|warn|error; default warn)
// ---------------------------------------------------------------------------
int log_level() {
    static int level = [] {
        const char* env = std::getenv("FRACDIM_LOG");
        std::string v = env ? env : "warn";
        if (v == "debug") return 0;
        if (v == "info") return 1;
        if (v == "warn") return 2;
        return 3;
    }();
    return level;
}

void log_msg(int level, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (level >= log_level()) std::fprintf(stderr, "[%s] %s\n", names[level], msg.c_str());
}

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Output {
    std::string format = "json"; // json | csv
    std::string path;            // empty -> stdout

    void emit(const json& record, const CsvTable& table) const {
        std::string text;
        if (format == "csv") {
            std::ostringstream os;
            for (std::size_t i = 0; i < table.header.size(); ++i)
                os << (i ? "," : "") << table.header[i];
            os << "\n";
            for (const auto& row : table.rows) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    os << (i ? "," : "") << fmt17(row[i]);
                os << "\n";
            }
            text = os.str();
        } else {
            text = record.dump(2);
            text += "\n";
        }
        if (path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream out(path, std::ios::binary);
            out << text;
        }
    }
};

json base_record(const std::string& command, json params, json tolerances) {
    json rec;
    rec["command"] = command;
    rec["params"] = std::move(params);
    rec["results"] = json::object();
    rec["tolerances"] = std::move(tolerances);
    rec["version"] = kVersion;
    return rec;
}

// Config-file support: flags override JSON config values, which override
// defaults. Implemented by applying config values only to options the user
// did not pass on the command line.
json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
    }
    return cfg;
}

template <typename T>
void cfg_override(const json& cfg, CLI::Option* opt, const char* key, T& value) {
    if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::vector<double> parse_triple(const std::string& s, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.size() != 3)
        throw CLI::ValidationError(flag, "expected three comma-separated numbers");
    return out;
}

double X_of(double a, double x) {
    return effective_coordinate({AxisDimension(a), CoordinateVariant::X}, x);
}

// ---------------------------------------------------------------------------
// named field battery shared by `operators` and `validate`
// ---------------------------------------------------------------------------
ScalarField battery_field(const std::string& name) {
    if (name == "power")
        return ScalarField{[](const Point& p) { return std::pow(p[0], 1.3) + p[1] * p[2]; }};
    if (name == "exp")
        return ScalarField{
            [](const Point& p) { return std::exp(-0.3 * (p[0] + p[1] + p[2])); }};
    if (name == "trig")
        return ScalarField{
            [](const Point& p) { return std::sin(p[0]) * std::cos(0.5 * p[1]) + p[2]; }};
    if (name == "poly")
        return ScalarField{[](const Point& p) { return p[0] * p[0] * p[1] + p[2]; }};
    throw CLI::ValidationError("--field", "unknown field '" + name +
                                              "' (power, exp, trig, poly)");
}

RealFn source_fn(const std::string& name) {
    if (name == "const") return [](double) { return 1.0; };
    if (name == "linear") return [](double x) { return x; };
    if (name == "sin") return [](double x) { return std::sin(x); };
    throw CLI::ValidationError("--f", "unknown source '" + name + "' (const, linear, sin)");
}

std::vector<Point> battery_points() {
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) {
        const double t = i / 19.0;
        pts.push_back({0.5 + 1.2 * t, 0.7 + 0.8 * (1.0 - t), 0.6 + t * t});
    }
    return pts;
}

// ---------------------------------------------------------------------------
// validation suite (also used by `validate`); returns rows of named checks
// ---------------------------------------------------------------------------
struct CheckRow {
    std::string name;
    double value;
    double tolerance;
    bool pass() const { return value <= tolerance; }
};

std::vector<CheckRow> run_identity_suite(std::uint64_t seed) {
    std::vector<CheckRow> rows;
    QuadratureSpec q;

    // volume / measure identities
    double vol_err = 0.0;
    for (double a : {0.3, 1.0, 2.2}) {
        for (double R : {0.5, 4.0}) {
            const double v = integrate_1d([](double) { return 1.0; }, {-R, R},
                                          WeightSpec::nids(AxisDimension(a)), q);
            vol_err = std::max(vol_err, std::fabs(v / ball_volume(AxisDimension(a), R) - 1.0));
        }
    }
    rows.push_back({"ball-volume-vs-quadrature", vol_err, 1e-10});

    // angular identities
    double ang_err = 0.0;
    for (double a1 : {0.4, 1.45, 2.5}) {
        for (double a2 : {0.4, 1.45, 2.5}) {
            const double cf =
                2.0 * gamma_fn(a1 / 2.0) * gamma_fn(a2 / 2.0) / gamma_fn((a1 + a2) / 2.0);
            ang_err = std::max(ang_err, std::fabs(angular_integral_phi(a1, a2, q) - cf) / cf);
        }
    }
    rows.push_back({"angular-identity", ang_err, 1e-8});

    // spherical reduction with MC cross-check
    MultiIndex m{AxisDimension(0.9), AxisDimension(0.8), AxisDimension(0.8)};
    Box3 box{{Interval{-6.0, 6.0}, Interval{-6.0, 6.0}, Interval{-6.0, 6.0}}};
    auto gauss = [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); };
    const double g3 = integrate_product(gauss, box, m, q);
    rows.push_back(
        {"gaussian-reduction", std::fabs(g3 / std::pow(kPi, 1.25) - 1.0), 1e-6});
    const auto mc = mc_integrate_product(gauss, box, m, seed, 200000);
    rows.push_back({"gaussian-mc-sigmas",
                    std::fabs(mc.estimate - g3) / std::max(mc.stderr_est, 1e-300), 4.0});

    // vector calculus identities
    MultiIndex aniso{AxisDimension(0.7), AxisDimension(1.2), AxisDimension(0.9)};
    LameFrame frame{aniso};
    ScalarField f{[](const Point& p) {
        return X_of(0.7, p[0]) * X_of(1.2, p[1]) + X_of(0.9, p[2]) * X_of(0.9, p[2]);
    }};
    auto cg = curl_alpha(grad_alpha(f, frame), frame);
    auto lap = scalar_laplacian(f, frame);
    auto dg = div_alpha(grad_alpha(f, frame), frame);
    double curl_err = 0.0, lap_err = 0.0;
    for (const auto& p : battery_points()) {
        for (int k = 0; k < 3; ++k) curl_err = std::max(curl_err, std::fabs(cg[k](p)));
        lap_err = std::max(lap_err, std::fabs(lap(p) - dg(p)));
    }
    rows.push_back({"curl-grad-zero", curl_err, 1e-6});
    rows.push_back({"laplacian-div-grad", lap_err, 1e-6});

    // operator zoo
    auto iso = [](double a) {
        return MultiIndex{AxisDimension(a), AxisDimension(a), AxisDimension(a), true};
    };
    double zoo_err = 0.0;
    for (double a : {0.4, 1.6}) {
        LaplacianSpec k1{LaplacianKind::K1, iso(a)};
        LaplacianSpec k2{LaplacianKind::K2, iso(a)};
        LaplacianSpec kl_half{LaplacianKind::Kl, iso(a), 0.5};
        LaplacianSpec kl_k1{LaplacianKind::Kl, iso(a), 1.0 - a / 2.0};
        LaplacianSpec ps{LaplacianKind::PS, iso(a)};
        LaplacianSpec zmn{LaplacianKind::ZMNApprox, iso(a)};
        ScalarField bf = battery_field("power");
        auto pts = battery_points();
        zoo_err = std::max(zoo_err, operator_discrepancy(k2, kl_half, bf, pts).max_abs);
        zoo_err = std::max(zoo_err, operator_discrepancy(k1, kl_k1, bf, pts).max_abs);
        zoo_err = std::max(zoo_err, operator_discrepancy(k1, ps, bf, pts).max_abs);
        zoo_err = std::max(zoo_err, operator_discrepancy(k2, zmn, bf, pts).max_abs);
    }
    rows.push_back({"operator-zoo-identities", zoo_err, 1e-10});

    // Poisson cross-check
    PoissonProblem pp{PoissonOperator::NEWS, AxisDimension(0.8),
                      [](double) { return 1.0; }, 0.5, 2.0, 0.0, 0.0};
    auto ana = poisson_solve_analytic(pp);
    auto num = poisson_solve_numeric(pp, 1001);
    double pois_err = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double x = 0.5 + 1.5 * i / 50.0;
        pois_err = std::max(pois_err, std::fabs(ana.phi(x) - num.phi(x)));
    }
    rows.push_back({"poisson-analytic-vs-numeric", pois_err, 1e-5});
    rows.push_back({"poisson-residual", ana.residual_norm, 1e-6});

    // beam roots and boundary conditions
    auto z = characteristic_root_arguments(5);
    double root_err = 0.0;
    for (double zi : z)
        root_err = std::max(root_err, std::fabs(std::cos(zi) + 1.0 / std::cosh(zi)));
    rows.push_back({"beam-characteristic-residual", root_err, 1e-12});
    BeamConfig cfg{1.0, 1.0, 1.0, 1.0, 5.0 / 6.0, 1.0, 2.0, AxisDimension(0.8)};
    double bc_err = 0.0;
    for (int n = 1; n <= 4; ++n)
        for (double r : mode_boundary_residuals(cfg, n)) bc_err = std::max(bc_err, r);
    rows.push_back({"beam-boundary-conditions", bc_err, 1e-6});

    return rows;
}

// ---------------------------------------------------------------------------
// subcommand options
// ---------------------------------------------------------------------------
struct CommonOpts {
    std::string config_path;
    Output out;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "JSON config file (flags override it)");
    cmd->add_option("--format", c.out.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", c.out.path, "Output path (default stdout)");
    cmd->add_option("--seed", c.seed, "Random seed (Monte Carlo, validate)");
    cmd->add_option("--tol", c.tol, "Quadrature relative tolerance");
}

int emit_checks(const std::string& command, const CommonOpts& c, json params,
                const std::vector<CheckRow>& rows) {
    json rec = base_record(command, std::move(params), json::object());
    CsvTable table{{"index", "value", "tolerance", "pass"}, {}};
    bool all_ok = true;
    int idx = 0;
    for (const auto& r : rows) {
        rec["results"][r.name] = {{"value", r.value}, {"pass", r.pass()}};
        rec["tolerances"][r.name] = r.tolerance;
        table.rows.push_back({static_cast<double>(idx++), r.value, r.tolerance,
                              r.pass() ? 1.0 : 0.0});
        all_ok = all_ok && r.pass();
    }
    c.out.emit(rec, table);
    return all_ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"integration and vector calculus on non-integer-dimensional product spaces"};
    app.require_subcommand(1);

    // ---- measure ----
    auto* measure_cmd = app.add_subcommand("measure", "closed-form measures and coordinates");
    CommonOpts mc_common;
    double m_alpha = 1.0, m_radius = 1.0, m_x = 1.0, m_rho0 = 1.0;
    std::string m_quantity = "ball-volume", m_alphas, m_edges, m_variant = "X";
    add_common(measure_cmd, mc_common);
    auto* m_alpha_opt = measure_cmd->add_option("--alpha", m_alpha, "axis dimension");
    auto* m_radius_opt = measure_cmd->add_option("--radius", m_radius, "radius");
    auto* m_x_opt = measure_cmd->add_option("--x", m_x, "coordinate value");
    auto* m_quantity_opt =
        measure_cmd->add_option("--quantity", m_quantity, "ball-volume | sphere-area | "
                                                          "effective-coordinate | mass");
    auto* m_alphas_opt = measure_cmd->add_option("--alphas", m_alphas, "a1,a2,a3 (mass)");
    auto* m_edges_opt = measure_cmd->add_option("--edges", m_edges, "L1,L2,L3 (mass)");
    measure_cmd->add_option("--rho0", m_rho0, "density (mass)");
    measure_cmd->add_option("--variant", m_variant, "X | Q (effective-coordinate)")
        ->check(CLI::IsMember({"X", "Q"}));

    // ---- integrate ----
    auto* integrate_cmd = app.add_subcommand("integrate", "product-measure integrals");
    CommonOpts i_common;
    std::string i_integrand = "gaussian", i_alphas = "1,1,1";
    double i_halfwidth = 6.0;
    bool i_mc = false, i_angular = false;
    std::size_t i_samples = 200000;
    add_common(integrate_cmd, i_common);
    auto* i_integrand_opt = integrate_cmd->add_option(
        "--integrand", i_integrand, "gaussian | exp-decay | polynomial");
    auto* i_alphas_opt = integrate_cmd->add_option("--alphas", i_alphas, "a1,a2,a3");
    integrate_cmd->add_option("--halfwidth", i_halfwidth, "box half-width per axis");
    integrate_cmd->add_flag("--mc", i_mc, "add a Monte Carlo cross-check");
    integrate_cmd->add_option("--samples", i_samples, "Monte Carlo samples");
    integrate_cmd->add_flag("--angular", i_angular, "run the angular identity check instead");

    // ---- operators ----
    auto* operators_cmd = app.add_subcommand("operators", "differential operator evaluation");
    CommonOpts o_common;
    std::string o_field = "power", o_alphas = "0.7,1.2,0.9", o_point = "1.0,1.0,1.0";
    bool o_verify = false;
    add_common(operators_cmd, o_common);
    operators_cmd->add_option("--field", o_field, "power | exp | trig | poly");
    auto* o_alphas_opt = operators_cmd->add_option("--alphas", o_alphas, "a1,a2,a3");
    operators_cmd->add_option("--point", o_point, "x1,x2,x3");
    operators_cmd->add_flag("--verify", o_verify, "run the identity suite");

    // ---- poisson ----
    auto* poisson_cmd = app.add_subcommand("poisson", "two-point Poisson solve");
    CommonOpts p_common;
    std::string p_operator = "news", p_f = "const";
    double p_alpha = 0.8, p_a = 0.5, p_b = 2.0, p_phia = 0.0, p_phib = 0.0;
    int p_nodes = 1001, p_samples = 21;
    add_common(poisson_cmd, p_common);
    auto* p_operator_opt = poisson_cmd->add_option("--operator", p_operator, "news | k2")
                               ->check(CLI::IsMember({"news", "k2"}));
    auto* p_alpha_opt = poisson_cmd->add_option("--alpha", p_alpha, "axis dimension");
    auto* p_f_opt = poisson_cmd->add_option("--f", p_f, "const | linear | sin");
    poisson_cmd->add_option("--a", p_a, "left endpoint (> 0)");
    poisson_cmd->add_option("--b", p_b, "right endpoint");
    poisson_cmd->add_option("--phia", p_phia, "Dirichlet value at a");
    poisson_cmd->add_option("--phib", p_phib, "Dirichlet value at b");
    poisson_cmd->add_option("--nodes", p_nodes, "numeric-solver nodes");
    poisson_cmd->add_option("--solution-samples", p_samples, "sample count in output");

    // ---- beam ----
    auto* beam_cmd = app.add_subcommand("beam", "fractal beam analysis");
    beam_cmd->require_subcommand(1);
    auto* modes_cmd = beam_cmd->add_subcommand("modes", "modal analysis");
    auto* simulate_cmd = beam_cmd->add_subcommand("simulate", "Timoshenko dynamics");
    CommonOpts bm_common, bs_common;
    double b_alpha = 1.0, b_L = 1.0, b_E = 1.0, b_I = 1.0, b_rho = 1.0, b_A = 1.0,
           b_kappa = 5.0 / 6.0, b_G = 1.0;
    int b_count = 3, b_shape_grid = 0;
    bool b_literal = false;
    add_common(modes_cmd, bm_common);
    auto* b_alpha_opt = modes_cmd->add_option("--alpha", b_alpha, "axial dimension");
    auto* b_count_opt = modes_cmd->add_option("--count", b_count, "number of modes");
    modes_cmd->add_option("--length", b_L, "beam length");
    modes_cmd->add_option("--E", b_E, "Young modulus");
    modes_cmd->add_option("--I", b_I, "cross-section second moment");
    modes_cmd->add_option("--rho", b_rho, "density");
    modes_cmd->add_option("--area", b_A, "cross-section area");
    modes_cmd->add_option("--shape-grid", b_shape_grid, "emit mode-1 shape on N points");
    modes_cmd->add_flag("--paper-literal", b_literal, "verbatim published forms");

    double s_alpha = 0.8, s_L = 2.0, s_dt = 0.002, s_amp = 1.0;
    int s_steps = 10000, s_nodes = 100, s_series = 50;
    add_common(simulate_cmd, bs_common);
    auto* s_alpha_opt = simulate_cmd->add_option("--alpha", s_alpha, "axial dimension");
    auto* s_steps_opt = simulate_cmd->add_option("--steps", s_steps, "time steps");
    simulate_cmd->add_option("--nodes", s_nodes, "spatial nodes");
    simulate_cmd->add_option("--dt", s_dt, "time step");
    simulate_cmd->add_option("--length", s_L, "beam length");
    simulate_cmd->add_option("--amplitude", s_amp, "initial modal amplitude");
    simulate_cmd->add_option("--series", s_series, "time-series rows in output");

    // ---- validate ----
    auto* validate_cmd = app.add_subcommand("validate", "run the full identity suite");
    CommonOpts v_common;
    add_common(validate_cmd, v_common);

    try {
        app.parse(argc, argv);

        // ----- measure -----
        if (measure_cmd->parsed()) {
            if (!mc_common.config_path.empty()) {
                const json cfg = load_config(mc_common.config_path);
                cfg_override(cfg, m_alpha_opt, "alpha", m_alpha);
                cfg_override(cfg, m_radius_opt, "radius", m_radius);
                cfg_override(cfg, m_x_opt, "x", m_x);
                cfg_override(cfg, m_quantity_opt, "quantity", m_quantity);
                cfg_override(cfg, m_alphas_opt, "alphas", m_alphas);
                cfg_override(cfg, m_edges_opt, "edges", m_edges);
            }
            json params{{"alpha", m_alpha}, {"radius", m_radius},   {"x", m_x},
                        {"quantity", m_quantity}, {"variant", m_variant}, {"rho0", m_rho0}};
            json rec = base_record("measure", params, json::object());
            CsvTable table{{"value"}, {}};
            double value = 0.0;
            if (m_quantity == "ball-volume") {
                value = ball_volume(AxisDimension(m_alpha), m_radius);
            } else if (m_quantity == "sphere-area") {
                value = sphere_area(AxisDimension(m_alpha), m_radius);
            } else if (m_quantity == "effective-coordinate") {
                const CoordinateVariant v =
                    m_variant == "Q" ? CoordinateVariant::Q : CoordinateVariant::X;
                value = effective_coordinate({AxisDimension(m_alpha), v}, m_x);
            } else if (m_quantity == "mass") {
                if (m_alphas.empty() || m_edges.empty())
                    throw CLI::ValidationError("--quantity",
                                               "mass requires --alphas and --edges");
                auto al = parse_triple(m_alphas, "--alphas");
                auto ed = parse_triple(m_edges, "--edges");
                MultiIndex mi{AxisDimension(al[0]), AxisDimension(al[1]), AxisDimension(al[2]),
                              true};
                value = parallelepiped_mass(mi, {ed[0], ed[1], ed[2]}, m_rho0);
                rec["params"]["alphas"] = m_alphas;
                rec["params"]["edges"] = m_edges;
            } else {
                throw CLI::ValidationError("--quantity", "unknown quantity " + m_quantity);
            }
            rec["results"]["value"] = value;
            table.rows.push_back({value});
            mc_common.out.emit(rec, table);
            return 0;
        }

        // ----- integrate -----
        if (integrate_cmd->parsed()) {
            if (!i_common.config_path.empty()) {
                const json cfg = load_config(i_common.config_path);
                cfg_override(cfg, i_integrand_opt, "integrand", i_integrand);
                cfg_override(cfg, i_alphas_opt, "alphas", i_alphas);
            }
            QuadratureSpec q;
            q.rel_tol = i_common.tol;
            if (i_angular) {
                double worst = 0.0;
                for (double a1 : {0.4, 1.45, 2.5}) {
                    for (double a2 : {0.4, 1.45, 2.5}) {
                        const double cf = 2.0 * gamma_fn(a1 / 2.0) * gamma_fn(a2 / 2.0) /
                                          gamma_fn((a1 + a2) / 2.0);
                        worst = std::max(
                            worst, std::fabs(angular_integral_phi(a1, a2, q) - cf) / cf);
                    }
                }
                json rec = base_record("integrate",
                                       json{{"angular", true}, {"tol", i_common.tol}},
                                       json{{"angular-identity", 1e-8}});
                rec["results"]["max-deviation"] = worst;
                rec["results"]["pass"] = worst <= 1e-8;
                i_common.out.emit(rec, {{"max_deviation"}, {{worst}}});
                return worst <= 1e-8 ? 0 : 3;
            }
            auto al = parse_triple(i_alphas, "--alphas");
            MultiIndex mi{AxisDimension(al[0]), AxisDimension(al[1]), AxisDimension(al[2]),
                          true};
            Fn3 f;
            if (i_integrand == "gaussian")
                f = [](double x, double y, double z) {
                    return std::exp(-(x * x + y * y + z * z));
                };
            else if (i_integrand == "exp-decay")
                f = [](double x, double y, double z) {
                    return std::exp(-std::sqrt(x * x + y * y + z * z));
                };
            else if (i_integrand == "polynomial")
                f = [](double x, double y, double z) { return 1.0 + x * x + y * y * z * z; };
            else
                throw CLI::ValidationError("--integrand", "unknown integrand " + i_integrand);
            const double hw = i_halfwidth;
            Box3 box{{Interval{-hw, hw}, Interval{-hw, hw}, Interval{-hw, hw}}};
            json params{{"integrand", i_integrand}, {"alphas", i_alphas},
                        {"halfwidth", hw},          {"mc", i_mc},
                        {"seed", i_common.seed},    {"samples", i_samples},
                        {"tol", i_common.tol}};
            json rec = base_record("integrate", params, json{{"rel_tol", i_common.tol}});
            const double value = integrate_product(f, box, mi, q);
            rec["results"]["estimate"] = value;
            CsvTable table{{"estimate"}, {{value}}};
            if (i_mc) {
                const auto r = mc_integrate_product(f, box, mi, i_common.seed, i_samples);
                rec["results"]["mc_estimate"] = r.estimate;
                rec["results"]["mc_stderr"] = r.stderr_est;
                table.header.insert(table.header.end(), {"mc_estimate", "mc_stderr"});
                table.rows[0].insert(table.rows[0].end(), {r.estimate, r.stderr_est});
            }
            i_common.out.emit(rec, table);
            return 0;
        }

        // ----- operators -----
        if (operators_cmd->parsed()) {
            if (!o_common.config_path.empty()) {
                const json cfg = load_config(o_common.config_path);
                cfg_override(cfg, o_alphas_opt, "alphas", o_alphas);
            }
            if (o_verify) {
                std::vector<CheckRow> rows;
                for (const auto& r : run_identity_suite(o_common.seed))
                    if (r.name != "gaussian-reduction" && r.name != "gaussian-mc-sigmas" &&
                        r.name != "ball-volume-vs-quadrature" && r.name != "angular-identity")
                        rows.push_back(r);
                return emit_checks("operators",
                                   o_common, json{{"verify", true}}, rows);
            }
            auto al = parse_triple(o_alphas, "--alphas");
            auto pt = parse_triple(o_point, "--point");
            MultiIndex mi{AxisDimension(al[0]), AxisDimension(al[1]), AxisDimension(al[2]),
                          true};
            LameFrame frame{mi};
            ScalarField f = battery_field(o_field);
            const Point p{pt[0], pt[1], pt[2]};
            json params{{"field", o_field}, {"alphas", o_alphas}, {"point", o_point}};
            json rec = base_record("operators", params, json::object());
            auto g = grad_alpha(f, frame);
            const double lap = scalar_laplacian(f, frame)(p);
            rec["results"]["grad"] = {g[0](p), g[1](p), g[2](p)};
            rec["results"]["laplacian"] = lap;
            rec["results"]["laplace_beltrami"] = laplace_beltrami(f, frame)(p);
            CsvTable table{{"grad1", "grad2", "grad3", "laplacian"},
                           {{g[0](p), g[1](p), g[2](p), lap}}};
            o_common.out.emit(rec, table);
            return 0;
        }

        // ----- poisson -----
        if (poisson_cmd->parsed()) {
            if (!p_common.config_path.empty()) {
                const json cfg = load_config(p_common.config_path);
                cfg_override(cfg, p_operator_opt, "operator", p_operator);
                cfg_override(cfg, p_alpha_opt, "alpha", p_alpha);
                cfg_override(cfg, p_f_opt, "f", p_f);
            }
            const PoissonOperator op =
                p_operator == "k2" ? PoissonOperator::K2 : PoissonOperator::NEWS;
            PoissonProblem problem{op,    AxisDimension(p_alpha), source_fn(p_f), p_a, p_b,
                                   p_phia, p_phib};
            auto sol = poisson_solve_analytic(problem);
            auto num = poisson_solve_numeric(problem, p_nodes);
            double gap = 0.0;
            json params{{"operator", p_operator}, {"alpha", p_alpha}, {"f", p_f},
                        {"a", p_a},               {"b", p_b},         {"phia", p_phia},
                        {"phib", p_phib},         {"nodes", p_nodes}};
            json rec = base_record("poisson", params,
                                   json{{"residual", 1e-6}, {"solver-agreement", 1e-5}});
            CsvTable table{{"x", "phi", "phi_numeric"}, {}};
            json samples = json::array();
            for (int i = 0; i < p_samples; ++i) {
                const double x = p_a + (p_b - p_a) * i / (p_samples - 1);
                const double pa = sol.phi(x), pn = num.phi(x);
                gap = std::max(gap, std::fabs(pa - pn));
                samples.push_back({{"x", x}, {"phi", pa}});
                table.rows.push_back({x, pa, pn});
            }
            rec["results"]["samples"] = samples;
            rec["results"]["residual_norm"] = sol.residual_norm;
            rec["results"]["numeric_max_gap"] = gap;
            rec["results"]["C1"] = sol.C1;
            rec["results"]["C2"] = sol.C2;
            p_common.out.emit(rec, table);
            log_msg(1, "poisson residual " + fmt17(sol.residual_norm));
            return 0;
        }

        // ----- beam modes -----
        if (modes_cmd->parsed()) {
            if (!bm_common.config_path.empty()) {
                const json cfg = load_config(bm_common.config_path);
                cfg_override(cfg, b_alpha_opt, "alpha", b_alpha);
                cfg_override(cfg, b_count_opt, "count", b_count);
            }
            BeamConfig cfg{b_rho, b_A,  b_E, b_I, 5.0 / 6.0, 1.0, b_L, AxisDimension(b_alpha),
                           b_literal};
            auto z = characteristic_root_arguments(b_count);
            auto k = characteristic_roots(cfg, b_count);
            auto w = natural_frequencies(cfg, k);
            json params{{"alpha", b_alpha}, {"count", b_count}, {"length", b_L},
                        {"E", b_E},         {"I", b_I},         {"rho", b_rho},
                        {"area", b_A},      {"paper_literal", b_literal}};
            json rec = base_record("beam modes", params, json::object());
            CsvTable table{{"n", "z", "k", "omega"}, {}};
            json modes = json::array();
            for (int n = 0; n < b_count; ++n) {
                modes.push_back({{"n", n + 1},
                                 {"z", z[static_cast<std::size_t>(n)]},
                                 {"k", k[static_cast<std::size_t>(n)]},
                                 {"omega", w[static_cast<std::size_t>(n)]}});
                table.rows.push_back({static_cast<double>(n + 1),
                                      z[static_cast<std::size_t>(n)],
                                      k[static_cast<std::size_t>(n)],
                                      w[static_cast<std::size_t>(n)]});
            }
            rec["results"]["modes"] = modes;
            if (b_shape_grid > 1) {
                std::vector<double> grid;
                for (int i = 0; i < b_shape_grid; ++i)
                    grid.push_back(b_L * i / (b_shape_grid - 1));
                auto mode = mode_shape(cfg, 1, grid);
                json shape = json::array();
                CsvTable stable{{"x", "X", "w"}, {}};
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    shape.push_back({{"x", grid[i]},
                                     {"X", X_of(b_alpha, grid[i])},
                                     {"w", mode.shape[i]}});
                    stable.rows.push_back({grid[i], X_of(b_alpha, grid[i]), mode.shape[i]});
                }
                rec["results"]["shape"] = shape;
                if (bm_common.out.format == "csv") {
                    bm_common.out.emit(rec, stable);
                    return 0;
                }
            }
            bm_common.out.emit(rec, table);
            return 0;
        }

        // ----- beam simulate -----
        if (simulate_cmd->parsed()) {
            if (!bs_common.config_path.empty()) {
                const json cfg = load_config(bs_common.config_path);
                cfg_override(cfg, s_alpha_opt, "alpha", s_alpha);
                cfg_override(cfg, s_steps_opt, "steps", s_steps);
            }
            BeamConfig cfg{1.0, 1.0, 1.0, 1.0, 5.0 / 6.0, 1.0, s_L, AxisDimension(s_alpha)};
            TimoshenkoSimulator sim(cfg, s_nodes);
            const double lambda = effective_length(cfg);
            const double k1 = characteristic_root_arguments(1)[0] / lambda;
            sim.set_initial(
                [&](double x) {
                    return s_amp * cantilever_shape(k1, lambda, X_of(s_alpha, x));
                },
                nullptr);
            const double e0 = sim.energy().total();
            json params{{"alpha", s_alpha}, {"steps", s_steps}, {"nodes", s_nodes},
                        {"dt", s_dt},       {"length", s_L},    {"amplitude", s_amp}};
            json rec = base_record("beam simulate", params,
                                   json{{"energy-drift", 1e-3}});
            CsvTable table{{"t", "tip", "kinetic", "bending", "shear"}, {}};
            json series = json::array();
            const int stride = std::max(1, s_steps / std::max(1, s_series));
            for (int s = 1; s <= s_steps; ++s) {
                sim.step(s_dt);
                if (s % stride == 0 || s == s_steps) {
                    const auto e = sim.energy();
                    series.push_back({{"t", sim.time()},
                                      {"tip", sim.w(s_nodes - 1)},
                                      {"kinetic", e.kinetic},
                                      {"bending", e.bending},
                                      {"shear", e.shear}});
                    table.rows.push_back(
                        {sim.time(), sim.w(s_nodes - 1), e.kinetic, e.bending, e.shear});
                }
            }
            const double e1 = sim.energy().total();
            const double drift = std::fabs(e1 - e0) / std::max(e0, 1e-300);
            rec["results"]["series"] = series;
            rec["results"]["initial_energy"] = e0;
            rec["results"]["final_energy"] = e1;
            rec["results"]["energy_drift"] = drift;
            bs_common.out.emit(rec, table);
            std::fprintf(stdout, "final energy drift: %.3g (initial %s, final %s)\n", drift,
                         fmt17(e0).c_str(), fmt17(e1).c_str());
            return drift <= 1e-3 ? 0 : 3;
        }

        // ----- validate -----
        if (validate_cmd->parsed()) {
            if (!v_common.config_path.empty()) (void)load_config(v_common.config_path);
            log_msg(1, "running identity suite");
            return emit_checks("validate", v_common, json{{"seed", v_common.seed}},
                               run_identity_suite(v_common.seed));
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const InvalidDimension& e) {
        std::fprintf(stderr, "error: invalid alpha: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
