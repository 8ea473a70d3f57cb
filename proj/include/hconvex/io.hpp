#pragma once

// Configuration, solution and report files (JSON), mesh export, and the
// command implementations behind the `hconvex` executable.

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hconvex/solver.hpp"
#include "hconvex/verify.hpp"

namespace hconvex::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Exit codes shared by all commands.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kParseError = 2,
    kInvalidCurvature = 3,
    kContinuationFailed = 4,
};

/// Malformed or out-of-range configuration / solution file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The f_tilde preset is not strictly positive and even on the grid.
class InvalidCurvature : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CurvaturePreset {
    std::string type = "constant";  // constant | even_quadratic | harmonic_even
    double value = 1.0;             // constant
    double alpha = 1.0;             // even_quadratic: 1 / (alpha + beta (x.e)^2)
    double beta = 0.0;
    std::vector<double> coeffs;     // harmonic_even: even-degree zonal coefficients c_0, c_2, ...
    double floor = 0.0;             // harmonic_even: required strict lower bound
    sphere::Vec3 axis{0.0, 0.0, 1.0};
};

struct Config {
    int n = 2;
    int k = 1;
    int n_theta = 32;
    int n_phi = 64;
    CurvaturePreset f_tilde;
    std::optional<double> gamma;  // nullopt = "auto"
    solver::ContinuationOptions continuation;
    long long seed = 0;
    double verify_tol = 2e-2;
};

[[nodiscard]] Config parse_config(const json& j);
[[nodiscard]] Config load_config(const fs::path& path);
[[nodiscard]] json config_to_json(const Config& c);

[[nodiscard]] sphere::GridPtr make_grid(const Config& c);
/// Samples the preset; no validation.
[[nodiscard]] sphere::ScalarField sample_f_tilde(const CurvaturePreset& preset, const sphere::GridPtr& grid);
/// Samples and validates the preset, then builds the problem. Throws InvalidCurvature.
[[nodiscard]] solver::ProblemSpec build_problem(const Config& c, const sphere::GridPtr& grid);

struct Solution {
    Config config;
    std::string status;  // "converged" | "failed"
    std::string failure_reason;
    double gamma = 1.0;
    double t = 1.0;
    std::vector<double> phi;
    std::vector<double> u;
    double residual_norm = 0.0;
    double min_eig_A = 0.0;
    json diagnostics;
};

[[nodiscard]] json solution_to_json(const Solution& s);
[[nodiscard]] Solution solution_from_json(const json& j);
[[nodiscard]] Solution load_solution(const fs::path& path);
[[nodiscard]] Solution make_solution(const Config& c, const solver::ProblemSpec& spec,
                                     const solver::ContinuationState& state, std::string status,
                                     std::string reason = {});

[[nodiscard]] json report_to_json(const verify::CurvatureReport& r, double tolerance, bool pass,
                                  std::optional<double> weingarten);

/// 17 significant digits.
[[nodiscard]] std::string format_number(double v);

void write_obj(std::ostream& out, const sphere::SphereGrid& grid, const std::vector<sphere::Vec3>& points);
void write_csv(std::ostream& out, const horo::SupportFunction& sf, const horo::ShiftedCurvatures& curv);

void write_json_file(const fs::path& path, const json& j);

// Commands. Diagnostics go to `log`; the return value is the process exit code.
int cmd_solve(const fs::path& config, const fs::path& out, std::ostream& log);
int cmd_verify(const fs::path& solution, const fs::path& report, std::ostream& log);
int cmd_bounds(const fs::path& config, std::ostream& out, std::ostream& log);
int cmd_export(const fs::path& solution, const std::string& format, const fs::path& out, std::ostream& log);

}  // namespace hconvex::io
