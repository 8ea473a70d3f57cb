#pragma once

// Newton and homotopy-continuation solver for the Hessian quotient equation
//
//   sigma_n(A[phi]) / sigma_{n-k}(A[phi]) = phi^{-k} ((1 - t) gamma + t f),   f = 1 / f_tilde,
//
// posed in log form on even functions over the sphere grid, together with
// the analytic C^0 bounds satisfied by its even h-convex solutions.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hconvex/horo.hpp"
#include "hconvex/sphere.hpp"

namespace hconvex::solver {

using horo::SupportFunction;
using sphere::GridPtr;
using sphere::ScalarField;
using sphere::SparseOp;

struct ProblemSpec {
    int n = 2;
    int k = 1;
    ScalarField f_tilde;  // prescribed shifted k-th mean curvature, positive and even
    ScalarField f;        // 1 / f_tilde
    double gamma = 1.0;   // homotopy anchor

    [[nodiscard]] const GridPtr& grid() const noexcept { return f.grid(); }
};

/// Validates f_tilde (strictly positive, even to 1e-12) and k. When gamma is
/// not given the geometric mean of f is used.
[[nodiscard]] ProblemSpec make_problem(ScalarField f_tilde, int k, std::optional<double> gamma = std::nullopt);

struct StepRecord {
    double t = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct ContinuationState {
    double t = 0.0;
    SupportFunction phi;
    double residual_norm = 0.0;
    double min_eig_A = 0.0;
    double max_eig_A = 0.0;  // diagnostic only
    int newton_iters = 0;
    std::vector<StepRecord> step_history;
    bool converged = false;
};

/// Builds a state at parameter t and fills the residual and eigenvalue diagnostics.
[[nodiscard]] ContinuationState make_state(const ProblemSpec& spec, SupportFunction phi, double t);

/// Newton iteration hit max_iter. Carries the best iterate.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, ContinuationState best)
        : std::runtime_error(what), best_(std::move(best)) {}
    [[nodiscard]] const ContinuationState& best() const noexcept { return best_; }

private:
    ContinuationState best_;
};

/// Line search step fell below 2^-30.
class StallError : public NonConvergence {
public:
    using NonConvergence::NonConvergence;
};

/// Homotopy increment underflowed. Carries the last converged (t, phi).
class ContinuationFailure : public std::runtime_error {
public:
    ContinuationFailure(const std::string& what, ContinuationState last_good)
        : std::runtime_error(what), last_good_(std::move(last_good)) {}
    [[nodiscard]] const ContinuationState& last_good() const noexcept { return last_good_; }

private:
    ContinuationState last_good_;
};

/// log sigma_n(A) - log sigma_{n-k}(A) + k log phi - log((1 - t) gamma + t f), per node.
/// Throws ConeViolation (with node and eigenvalue) when A[phi] is not positive definite.
[[nodiscard]] ScalarField residual(const ProblemSpec& spec, const SupportFunction& phi, double t);

/// The constant c > 1 with c^k ((c - 1/c) / 2)^k = C(n, k) gamma.
[[nodiscard]] double constant_solution(int n, int k, double gamma);

/// Exact derivative of the discrete residual with respect to node values of phi.
[[nodiscard]] SparseOp jacobian(const ProblemSpec& spec, const SupportFunction& phi, double t);

struct NewtonOptions {
    double tol = 1e-10;       // L-inf residual
    int max_iter = 30;
    double step_tol = 1e-12;  // also converged once |delta|_inf <= step_tol * |phi|_inf
};

/// Damped Newton on the even subspace with cone-safeguarded backtracking.
/// Throws NonConvergence after max_iter steps and StallError when backtracking fails.
[[nodiscard]] ContinuationState newton_solve(const ProblemSpec& spec, ContinuationState state, const NewtonOptions& opts);

struct ContinuationOptions {
    int steps = 4;
    double min_dt = 1e-4;
    NewtonOptions newton;
};

/// Path-follows the homotopy from the constant solution at t = 0 to t = 1.
[[nodiscard]] ContinuationState continuation_solve(const ProblemSpec& spec, const ContinuationOptions& opts);

/// exp(mean of log f) over the grid.
[[nodiscard]] double choose_gamma(const ScalarField& f);

/// g(x) = x^{2k} 2^{-k} (1 - x^{-2})^k, increasing on [1, inf).
[[nodiscard]] double g_function(double x, int k);
/// Inverse of g by bisection on [1, 1e10].
[[nodiscard]] double g_inverse(double y, int k);

struct Bounds {
    double phi_low = 0.0;
    double phi_high = 0.0;
};

/// Analytic C^0 bounds for even solutions at t = 1.
[[nodiscard]] Bounds apriori_bounds(const ProblemSpec& spec);

/// min phi - (max phi + 1 / max phi) / 2; nonnegative for even h-convex solutions.
[[nodiscard]] double midpoint_check(const SupportFunction& phi);

/// Slack allowed on the analytic bounds for a discrete solution: 10 h^2.
[[nodiscard]] double discretization_slack(const sphere::SphereGrid& grid);

}  // namespace hconvex::solver
