// hconvex: solve, verify, bound and export prescribed shifted mean curvature problems.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "hconvex/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Prescribed shifted curvature solver for h-convex hypersurfaces"};
    app.require_subcommand(1);

    std::string config, out, solution, report, format;

    auto* solve = app.add_subcommand("solve", "Solve the configured problem by homotopy continuation");
    solve->add_option("--config", config, "Problem configuration (JSON)")->required();
    solve->add_option("--out", out, "Solution file to write")->required();

    auto* verify = app.add_subcommand("verify", "Re-measure curvatures of a solution and run the monitors");
    verify->add_option("--solution", solution, "Solution file")->required();
    verify->add_option("--report", report, "Report file to write")->required();

    auto* bounds = app.add_subcommand("bounds", "Print the analytic C^0 bounds for a configuration");
    bounds->add_option("--config", config, "Problem configuration (JSON)")->required();

    auto* exp = app.add_subcommand("export", "Export the Poincare-ball surface of a solution");
    exp->add_option("--solution", solution, "Solution file")->required();
    exp->add_option("--format", format, "obj or csv")->required();
    exp->add_option("--out", out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hconvex::io::kParseError;
    }

    namespace io = hconvex::io;
    if (*solve) return io::cmd_solve(config, out, std::cerr);
    if (*verify) return io::cmd_verify(solution, report, std::cerr);
    if (*bounds) return io::cmd_bounds(config, std::cout, std::cerr);
    return io::cmd_export(solution, format, out, std::cerr);
}
