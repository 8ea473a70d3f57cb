#include <cmath>
#include <fstream>
#include <ostream>

#include "hconvex/errors.hpp"
#include "hconvex/io.hpp"

namespace hconvex::io {

namespace {

struct Loaded {
    Solution solution;
    sphere::GridPtr grid;
    solver::ProblemSpec spec;
};

Loaded load_for_postprocessing(const fs::path& path) {
    Solution s = load_solution(path);
    sphere::GridPtr grid = make_grid(s.config);
    solver::ProblemSpec spec;
    try {
        spec = build_problem(s.config, grid);
    } catch (const InvalidCurvature& e) {
        throw ParseError(std::string("solution config: ") + e.what());
    }
    spec.gamma = s.gamma;
    return {std::move(s), std::move(grid), std::move(spec)};
}

}  // namespace

int cmd_solve(const fs::path& config_path, const fs::path& out, std::ostream& log) {
    Config config;
    try {
        config = load_config(config_path);
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kParseError;
    }
    const sphere::GridPtr grid = make_grid(config);
    solver::ProblemSpec spec;
    try {
        spec = build_problem(config, grid);
    } catch (const InvalidCurvature& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidCurvature;
    }

    try {
        const solver::ContinuationState state = solver::continuation_solve(spec, config.continuation);
        write_json_file(out, solution_to_json(make_solution(config, spec, state, "converged")));
        log << "converged: residual " << format_number(state.residual_norm) << ", " << state.newton_iters
            << " Newton iterations over " << state.step_history.size() << " continuation steps\n";
        return kOk;
    } catch (const solver::ContinuationFailure& e) {
        write_json_file(out, solution_to_json(make_solution(config, spec, e.last_good(), "failed", e.what())));
        log << "error: " << e.what() << '\n';
        return kContinuationFailed;
    } catch (const solver::NonConvergence& e) {
        write_json_file(out, solution_to_json(make_solution(config, spec, e.best(), "failed", e.what())));
        log << "error: " << e.what() << '\n';
        return kContinuationFailed;
    } catch (const std::runtime_error& e) {
        log << "error: " << e.what() << '\n';
        return kContinuationFailed;
    }
}

int cmd_verify(const fs::path& solution_path, const fs::path& report_path, std::ostream& log) {
    Loaded in;
    try {
        in = load_for_postprocessing(solution_path);
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kParseError;
    }
    const double tol = in.solution.config.verify_tol;
    try {
        const horo::SupportFunction sf(sphere::ScalarField(in.grid, in.solution.phi));
        const horo::HyperboloidPatch patch = horo::embed(sf);
        const horo::ShiftedCurvatures measured = verify::measure_curvatures(patch, in.spec.k);
        verify::CurvatureReport report = verify::compare(measured, in.spec, sf, patch);

        const double min_eig = horo::min_eigenvalue(horo::build_A(sf));
        report.monitors.push_back({"A_positive_definite", min_eig, 0.0, min_eig > 0.0});
        std::optional<double> crosscheck;
        if (min_eig > 0.0) crosscheck = verify::weingarten_crosscheck(sf);

        const bool pass = report.all_monitors_pass() && report.linf_rel_error <= tol;
        write_json_file(report_path, report_to_json(report, tol, pass, crosscheck));
        for (const auto& m : report.monitors) {
            if (!m.pass) log << "monitor failed: " << m.name << " = " << format_number(m.value) << '\n';
        }
        log << "linf relative error " << format_number(report.linf_rel_error) << " (tolerance " << format_number(tol)
            << ")\n";
        return pass ? kOk : kCheckFailed;
    } catch (const std::exception& e) {
        write_json_file(report_path, json{{"format", "hconvex-report"}, {"version", 1}, {"pass", false}, {"error", e.what()}});
        log << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

int cmd_bounds(const fs::path& config_path, std::ostream& out, std::ostream& log) {
    try {
        const Config config = load_config(config_path);
        const solver::ProblemSpec spec = build_problem(config, make_grid(config));
        const solver::Bounds b = solver::apriori_bounds(spec);
        const json j{{"phi_low", b.phi_low},
                     {"phi_high", b.phi_high},
                     {"u_low", std::log(b.phi_low)},
                     {"u_high", std::log(b.phi_high)}};
        out << j.dump(2) << '\n';
        return kOk;
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const InvalidCurvature& e) {
        log << "error: " << e.what() << '\n';
        return kInvalidCurvature;
    }
}

int cmd_export(const fs::path& solution_path, const std::string& format, const fs::path& out_path, std::ostream& log) {
    if (format != "obj" && format != "csv") {
        log << "error: unknown export format '" << format << "'\n";
        return kParseError;
    }
    Loaded in;
    try {
        in = load_for_postprocessing(solution_path);
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kParseError;
    }
    try {
        const horo::SupportFunction sf(sphere::ScalarField(in.grid, in.solution.phi));
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path.string());
        if (format == "obj") {
            write_obj(out, *in.grid, horo::to_poincare(horo::embed(sf)));
        } else {
            const auto w = horo::shifted_weingarten(sf, horo::build_A(sf));
            write_csv(out, sf, horo::shifted_curvatures(w, in.spec.k));
        }
        return kOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

}  // namespace hconvex::io
