#include "hconvex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "hconvex/errors.hpp"

namespace hconvex::io {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

double zonal(const CurvaturePreset& p, int n, double s) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        const auto degree = static_cast<unsigned>(2 * i);
        // Even-degree zonal harmonics: Legendre on S^2, Chebyshev (cos 2l psi) on S^1.
        const double basis = n == 2 ? std::legendre(degree, s) : std::cos(degree * std::acos(std::clamp(s, -1.0, 1.0)));
        total += p.coeffs[i] * basis;
    }
    return total;
}

double evaluate(const CurvaturePreset& p, int n, const sphere::Vec3& x) {
    const double s = x[0] * p.axis[0] + x[1] * p.axis[1] + x[2] * p.axis[2];
    if (p.type == "constant") return p.value;
    if (p.type == "even_quadratic") return 1.0 / (p.alpha + p.beta * s * s);
    return zonal(p, n, s);
}

CurvaturePreset parse_preset(const json& j, int n) {
    CurvaturePreset p;
    p.type = j.at("type").get<std::string>();
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (params.contains("axis")) {
        const auto axis = params.at("axis").get<std::vector<double>>();
        if (axis.size() != static_cast<std::size_t>(n + 1)) throw ParseError("f_tilde.params.axis must have n+1 entries");
        double norm = 0.0;
        for (double a : axis) norm += a * a;
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) throw ParseError("f_tilde.params.axis must be nonzero");
        p.axis = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < axis.size(); ++i) p.axis[i] = axis[i] / norm;
    } else {
        p.axis = n == 2 ? sphere::Vec3{0.0, 0.0, 1.0} : sphere::Vec3{0.0, 1.0, 0.0};
    }
    if (p.type == "constant") {
        p.value = get_or(params, "value", 1.0);
    } else if (p.type == "even_quadratic") {
        p.alpha = get_or(params, "alpha", 1.0);
        p.beta = get_or(params, "beta", 0.0);
    } else if (p.type == "harmonic_even") {
        p.coeffs = params.at("coeffs").get<std::vector<double>>();
        if (p.coeffs.empty()) throw ParseError("f_tilde.params.coeffs must not be empty");
        p.floor = get_or(params, "floor", 0.0);
    } else {
        throw ParseError("unknown f_tilde type '" + p.type + "'");
    }
    return p;
}

json preset_to_json(const CurvaturePreset& p, int n) {
    json params = json::object();
    std::vector<double> axis(p.axis.begin(), p.axis.begin() + n + 1);
    params["axis"] = axis;
    if (p.type == "constant") {
        params["value"] = p.value;
    } else if (p.type == "even_quadratic") {
        params["alpha"] = p.alpha;
        params["beta"] = p.beta;
    } else {
        params["coeffs"] = p.coeffs;
        params["floor"] = p.floor;
    }
    return {{"type", p.type}, {"params", params}};
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace

Config parse_config(const json& j) {
    try {
        Config c;
        c.n = j.at("n").get<int>();
        c.k = j.at("k").get<int>();
        if (c.n != 1 && c.n != 2) throw ParseError("n must be 1 or 2");
        if (c.k < 1 || c.k > c.n) throw ParseError("k must satisfy 1 <= k <= n");
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            c.n_theta = get_or(g, "n_theta", c.n_theta);
            c.n_phi = get_or(g, "n_phi", c.n_phi);
        }
        if (c.n_phi < 8 || c.n_phi % 2 != 0) throw ParseError("grid.n_phi must be even and at least 8");
        if (c.n == 2 && c.n_theta < 8) throw ParseError("grid.n_theta must be at least 8");
        c.f_tilde = parse_preset(j.at("f_tilde"), c.n);
        if (j.contains("gamma")) {
            const json& g = j.at("gamma");
            if (g.is_string()) {
                if (g.get<std::string>() != "auto") throw ParseError("gamma must be \"auto\" or a positive number");
            } else {
                c.gamma = g.get<double>();
                if (!(*c.gamma > 0.0)) throw ParseError("gamma must be positive");
            }
        }
        if (j.contains("continuation")) {
            const json& s = j.at("continuation");
            c.continuation.steps = get_or(s, "steps", c.continuation.steps);
            c.continuation.min_dt = get_or(s, "min_dt", c.continuation.min_dt);
        }
        if (c.continuation.steps < 1 || !(c.continuation.min_dt > 0.0)) {
            throw ParseError("continuation.steps must be >= 1 and min_dt > 0");
        }
        if (j.contains("newton")) {
            const json& s = j.at("newton");
            c.continuation.newton.tol = get_or(s, "tol", c.continuation.newton.tol);
            c.continuation.newton.max_iter = get_or(s, "max_iter", c.continuation.newton.max_iter);
            c.continuation.newton.step_tol = get_or(s, "step_tol", c.continuation.newton.step_tol);
        }
        if (!(c.continuation.newton.tol > 0.0) || c.continuation.newton.max_iter < 1 ||
            !(c.continuation.newton.step_tol >= 0.0)) {
            throw ParseError("newton.tol must be > 0, max_iter >= 1 and step_tol >= 0");
        }
        c.seed = get_or(j, "seed", c.seed);
        if (j.contains("verify")) c.verify_tol = get_or(j.at("verify"), "linf_tol", c.verify_tol);
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

Config load_config(const fs::path& path) { return parse_config(read_json_file(path)); }

json config_to_json(const Config& c) {
    json j;
    j["n"] = c.n;
    j["k"] = c.k;
    j["grid"] = {{"n_theta", c.n_theta}, {"n_phi", c.n_phi}};
    j["f_tilde"] = preset_to_json(c.f_tilde, c.n);
    if (c.gamma) {
        j["gamma"] = *c.gamma;
    } else {
        j["gamma"] = "auto";
    }
    j["continuation"] = {{"steps", c.continuation.steps}, {"min_dt", c.continuation.min_dt}};
    j["newton"] = {{"tol", c.continuation.newton.tol},
                   {"max_iter", c.continuation.newton.max_iter},
                   {"step_tol", c.continuation.newton.step_tol}};
    j["seed"] = c.seed;
    j["verify"] = {{"linf_tol", c.verify_tol}};
    return j;
}

sphere::GridPtr make_grid(const Config& c) { return sphere::SphereGrid::build(c.n, c.n_theta, c.n_phi); }

sphere::ScalarField sample_f_tilde(const CurvaturePreset& preset, const sphere::GridPtr& grid) {
    return sphere::ScalarField::from_function(grid, [&](const sphere::Vec3& x) { return evaluate(preset, grid->dim(), x); });
}

solver::ProblemSpec build_problem(const Config& c, const sphere::GridPtr& grid) {
    const CurvaturePreset& p = c.f_tilde;
    const double floor = p.type == "harmonic_even" ? p.floor : 0.0;
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = evaluate(p, c.n, grid->node(i));
        if (!std::isfinite(v) || !(v > floor) || !(v > 0.0)) {
            throw InvalidCurvature(p.type + " preset gives f_tilde = " + format_number(v) + " at node " +
                                   std::to_string(i) + "; it must exceed " + format_number(floor));
        }
        values[i] = v;
    }
    sphere::ScalarField f_tilde(grid, std::move(values));
    if (sphere::evenness_defect(f_tilde) > 1e-12) throw InvalidCurvature("f_tilde is not even on the grid");
    try {
        return solver::make_problem(sphere::even_project(f_tilde), c.k, c.gamma);
    } catch (const ArgumentError& e) {
        throw InvalidCurvature(e.what());
    }
}

json solution_to_json(const Solution& s) {
    json j;
    j["format"] = "hconvex-solution";
    j["version"] = 1;
    j["status"] = s.status;
    if (!s.failure_reason.empty()) j["failure_reason"] = s.failure_reason;
    j["config"] = config_to_json(s.config);
    j["gamma"] = s.gamma;
    j["t"] = s.t;
    j["phi"] = s.phi;
    j["u"] = s.u;
    j["residual_norm"] = s.residual_norm;
    j["min_eig_A"] = s.min_eig_A;
    j["diagnostics"] = s.diagnostics;
    return j;
}

Solution solution_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "hconvex-solution") throw ParseError("not a solution file");
        Solution s;
        s.config = parse_config(j.at("config"));
        s.status = j.at("status").get<std::string>();
        s.failure_reason = get_or(j, "failure_reason", std::string());
        s.gamma = j.at("gamma").get<double>();
        s.t = j.at("t").get<double>();
        s.phi = j.at("phi").get<std::vector<double>>();
        s.u = j.at("u").get<std::vector<double>>();
        s.residual_norm = j.at("residual_norm").get<double>();
        s.min_eig_A = j.at("min_eig_A").get<double>();
        s.diagnostics = get_or(j, "diagnostics", json::object());
        const std::size_t expected = static_cast<std::size_t>(s.config.n == 2 ? s.config.n_theta : 1) *
                                     static_cast<std::size_t>(s.config.n_phi);
        if (s.phi.size() != expected || s.u.size() != expected) throw ParseError("solution node count does not match grid");
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("solution: ") + e.what());
    }
}

Solution load_solution(const fs::path& path) { return solution_from_json(read_json_file(path)); }

Solution make_solution(const Config& c, const solver::ProblemSpec& spec, const solver::ContinuationState& state,
                       std::string status, std::string reason) {
    Solution s;
    s.config = c;
    s.status = std::move(status);
    s.failure_reason = std::move(reason);
    s.gamma = spec.gamma;
    s.t = state.t;
    s.phi = state.phi.phi().values();
    s.u = state.phi.u().values();
    s.residual_norm = state.residual_norm;
    s.min_eig_A = state.min_eig_A;

    json history = json::array();
    for (const auto& step : state.step_history) {
        history.push_back({{"t", step.t}, {"iterations", step.iterations}, {"residual", step.residual}});
    }
    const solver::Bounds b = solver::apriori_bounds(spec);
    s.diagnostics = {
        {"max_eig_A", state.max_eig_A},
        {"newton_iters", state.newton_iters},
        {"history", history},
        {"bounds", {{"phi_low", b.phi_low}, {"phi_high", b.phi_high}}},
        {"midpoint_check", solver::midpoint_check(state.phi)},
    };
    return s;
}

json report_to_json(const verify::CurvatureReport& r, double tolerance, bool pass, std::optional<double> weingarten) {
    json monitors = json::array();
    for (const auto& m : r.monitors) {
        monitors.push_back({{"name", m.name}, {"value", m.value}, {"threshold", m.threshold}, {"pass", m.pass}});
    }
    json j;
    j["format"] = "hconvex-report";
    j["version"] = 1;
    j["pass"] = pass;
    j["linf_rel_error"] = r.linf_rel_error;
    j["l2_rel_error"] = r.l2_rel_error;
    j["linf_tolerance"] = tolerance;
    j["min_kappa_tilde"] = r.min_kappa_tilde;
    j["monitors"] = monitors;
    j["weingarten_crosscheck"] = weingarten ? json(*weingarten) : json(nullptr);
    j["h_tilde_k_measured"] = r.h_tilde_k_measured.values();
    j["h_tilde_k_prescribed"] = r.h_tilde_k_prescribed.values();
    return j;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_obj(std::ostream& out, const sphere::SphereGrid& grid, const std::vector<sphere::Vec3>& points) {
    out << "# hconvex Poincare-ball surface\n";
    for (const auto& p : points) {
        out << "v " << format_number(p[0]) << ' ' << format_number(p[1]) << ' ' << format_number(p[2]) << '\n';
    }
    const int cols = grid.n_phi();
    if (grid.dim() == 1) {
        out << 'l';
        for (int j = 0; j < cols; ++j) out << ' ' << j + 1;
        out << " 1\n";
        return;
    }
    auto vid = [&](int i, int j) { return grid.wrap(i, j) + 1; };
    const int rows = grid.n_theta();
    // North cap: ring 0 seen from outside.
    out << 'f';
    for (int j = cols - 1; j >= 0; --j) out << ' ' << vid(0, j);
    out << '\n';
    for (int i = 0; i + 1 < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            out << "f " << vid(i, j) << ' ' << vid(i + 1, j) << ' ' << vid(i + 1, j + 1) << ' ' << vid(i, j + 1) << '\n';
        }
    }
    out << 'f';
    for (int j = 0; j < cols; ++j) out << ' ' << vid(rows - 1, j);
    out << '\n';
}

void write_csv(std::ostream& out, const horo::SupportFunction& sf, const horo::ShiftedCurvatures& curv) {
    const sphere::SphereGrid& g = *sf.grid();
    const int n = g.dim();
    out << "theta,longitude,phi,u";
    for (int i = 1; i <= n; ++i) out << ",kappa_tilde_" << i;
    out << ",h_tilde_" << curv.k << '\n';
    for (std::size_t p = 0; p < g.size(); ++p) {
        // The circle is written as the equator of S^2.
        const double theta = n == 2 ? g.theta(p) : 0.5 * std::numbers::pi;
        const double lon = n == 2 ? g.longitude(p) : g.theta(p);
        out << format_number(theta) << ',' << format_number(lon) << ',' << format_number(sf.phi()[p]) << ','
            << format_number(sf.u()[p]);
        for (int i = 0; i < n; ++i) out << ',' << format_number(curv.kappa_tilde[p][i]);
        out << ',' << format_number(curv.h_tilde_k[p]) << '\n';
    }
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace hconvex::io
