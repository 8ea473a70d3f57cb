#include "hconvex/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hconvex/errors.hpp"
#include "hconvex/symfunc.hpp"

namespace hconvex::solver {

namespace {

using symfunc::SymMatrix;

double rhs_value(const ProblemSpec& spec, std::size_t p, double t) {
    return (1.0 - t) * spec.gamma + t * spec.f[p];
}

void require_positive(const sphere::SymTensorField& a) {
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (!symfunc::positive_definite(a[p])) {
            throw ConeViolation("A[phi] leaves the positive cone at node " + std::to_string(p),
                                symfunc::eigenvalues(a[p]).min(), static_cast<std::ptrdiff_t>(p));
        }
    }
}

double linf(const ScalarField& r) { return r.max_abs(); }

/// Antipodal pairs: Newton updates live in the span of pair indicators.
struct EvenBasis {
    std::vector<std::size_t> representative;  // one node per pair
    SparseOp expand;                          // nodes x pairs
    SparseOp restrict_rows;                   // pairs x nodes

    explicit EvenBasis(const sphere::SphereGrid& g) {
        std::vector<Eigen::Triplet<double>> e, r;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (i < g.antipode(i)) {
                const auto pair = static_cast<Eigen::Index>(representative.size());
                representative.push_back(i);
                e.emplace_back(static_cast<Eigen::Index>(i), pair, 1.0);
                e.emplace_back(static_cast<Eigen::Index>(g.antipode(i)), pair, 1.0);
                r.emplace_back(pair, static_cast<Eigen::Index>(i), 1.0);
            }
        }
        const auto nodes = static_cast<Eigen::Index>(g.size());
        const auto pairs = static_cast<Eigen::Index>(representative.size());
        expand.resize(nodes, pairs);
        expand.setFromTriplets(e.begin(), e.end());
        restrict_rows.resize(pairs, nodes);
        restrict_rows.setFromTriplets(r.begin(), r.end());
    }
};

Eigen::VectorXd solve_even(const SparseOp& jac, const Eigen::VectorXd& rhs, const EvenBasis& basis) {
    const Eigen::SparseMatrix<double> reduced = basis.restrict_rows * jac * basis.expand;
    const Eigen::VectorXd b = basis.restrict_rows * rhs;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(reduced);
    if (lu.info() != Eigen::Success) throw GeometryError("Newton system is singular on the even subspace");
    Eigen::VectorXd x = lu.solve(b);
    // One refinement pass keeps the relative residual below 1e-10.
    const Eigen::VectorXd res = b - reduced * x;
    x += lu.solve(res);
    return basis.expand * x;
}

}  // namespace

ProblemSpec make_problem(ScalarField f_tilde, int k, std::optional<double> gamma) {
    const int n = f_tilde.grid()->dim();
    if (k < 1 || k > n) throw ArgumentError("k must satisfy 1 <= k <= n");
    const sphere::SphereGrid& g = *f_tilde.grid();
    std::vector<double> f(f_tilde.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f_tilde[i] > 0.0)) {
            throw ArgumentError("prescribed curvature must be positive; node " + std::to_string(i) + " has " +
                                std::to_string(f_tilde[i]));
        }
        if (std::abs(f_tilde[i] - f_tilde[g.antipode(i)]) > 1e-12) {
            throw ArgumentError("prescribed curvature must be even; node " + std::to_string(i) + " differs from its antipode");
        }
        f[i] = 1.0 / f_tilde[i];
    }
    ProblemSpec spec;
    spec.n = n;
    spec.k = k;
    spec.f = ScalarField(f_tilde.grid(), std::move(f));
    spec.f_tilde = std::move(f_tilde);
    spec.gamma = gamma ? *gamma : choose_gamma(spec.f);
    if (!(spec.gamma > 0.0)) throw ArgumentError("gamma must be positive");
    return spec;
}

ScalarField residual(const ProblemSpec& spec, const SupportFunction& phi, double t) {
    const horo::AField a = horo::build_A(phi);
    require_positive(a);
    std::vector<double> r(a.size());
    const int n = spec.n;
    const int k = spec.k;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double top = symfunc::sigma_matrix(a[p], n);
        const double bottom = symfunc::sigma_matrix(a[p], n - k);
        r[p] = std::log(top) - std::log(bottom) + k * phi.u()[p] - std::log(rhs_value(spec, p, t));
    }
    return ScalarField(phi.grid(), std::move(r));
}

ContinuationState make_state(const ProblemSpec& spec, SupportFunction phi, double t) {
    const horo::AField a = horo::build_A(phi);
    ContinuationState s{t, std::move(phi), 0.0, 0.0, 0.0, 0, {}, false};
    s.min_eig_A = horo::min_eigenvalue(a);
    s.max_eig_A = horo::max_eigenvalue(a);
    s.residual_norm = linf(residual(spec, s.phi, t));
    return s;
}

double constant_solution(int n, int k, double gamma) {
    if (!(gamma > 0.0)) throw ArgumentError("constant_solution: gamma must be positive");
    if (k < 1 || k > n) throw ArgumentError("constant_solution: need 1 <= k <= n");
    return std::sqrt(1.0 + 2.0 * std::pow(symfunc::binomial(n, k) * gamma, 1.0 / k));
}

SparseOp jacobian(const ProblemSpec& spec, const SupportFunction& phi, double t) {
    (void)t;  // the right-hand side does not depend on phi
    const sphere::SphereGrid& g = *phi.grid();
    const sphere::DifferenceOps& ops = g.ops();
    const horo::AField a = horo::build_A(phi);
    require_positive(a);
    const sphere::FrameDerivatives d = sphere::derivatives(phi.phi());
    const int n = spec.n;
    const int k = spec.k;
    const auto count = static_cast<Eigen::Index>(g.size());

    Eigen::VectorXd b11(count), b12(count), b22(count), c1(count), c2(count), c0(count);
    for (Eigen::Index e = 0; e < count; ++e) {
        const auto p = static_cast<std::size_t>(e);
        const SymMatrix& m = a[p];
        SymMatrix b = (1.0 / symfunc::sigma_matrix(m, n)) * symfunc::sigma_gradient(m, n);
        if (n - k >= 1) b += (-1.0 / symfunc::sigma_matrix(m, n - k)) * symfunc::sigma_gradient(m, n - k);
        const double v = phi.phi()[p];
        const double g1 = d.grad[p][0];
        const double g2 = d.grad[p][1];
        const double tr = b.trace();
        b11[e] = b(0, 0);
        b12[e] = n == 2 ? 2.0 * b(0, 1) : 0.0;
        b22[e] = n == 2 ? b(1, 1) : 0.0;
        c1[e] = -tr * g1 / v;
        c2[e] = -tr * g2 / v;
        c0[e] = tr * (0.5 * (g1 * g1 + g2 * g2) / (v * v) + 0.5 * (1.0 + 1.0 / (v * v))) + k / v;
    }

    SparseOp jac = b11.asDiagonal() * ops.d11;
    jac += c1.asDiagonal() * ops.d1;
    if (n == 2) {
        jac += b12.asDiagonal() * ops.d12;
        jac += b22.asDiagonal() * ops.d22;
        jac += c2.asDiagonal() * ops.d2;
    }
    SparseOp diag(count, count);
    diag.reserve(Eigen::VectorXi::Constant(count, 1));
    for (Eigen::Index e = 0; e < count; ++e) diag.insert(e, e) = c0[e];
    jac += diag;
    jac.makeCompressed();
    return jac;
}

ContinuationState newton_solve(const ProblemSpec& spec, ContinuationState state, const NewtonOptions& opts) {
    const sphere::SphereGrid& g = *spec.grid();
    const EvenBasis basis(g);
    const double t = state.t;

    ScalarField r = residual(spec, state.phi, t);
    state.residual_norm = linf(r);
    state.newton_iters = 0;
    state.converged = state.residual_norm <= opts.tol;

    while (!state.converged) {
        if (state.newton_iters >= opts.max_iter) {
            throw NonConvergence("Newton did not converge in " + std::to_string(opts.max_iter) + " iterations", state);
        }
        const SparseOp jac = jacobian(spec, state.phi, t);
        const Eigen::VectorXd delta = solve_even(jac, -r.vec(), basis);
        // A correction at roundoff level means the residual cannot improve further.
        if (delta.lpNorm<Eigen::Infinity>() <= opts.step_tol * state.phi.phi().max_abs()) {
            state.converged = true;
            break;
        }

        double step = 1.0;
        const double floor = std::ldexp(1.0, -30);
        while (true) {
            if (step < floor) throw StallError("line search stalled at t = " + std::to_string(t), state);
            std::vector<double> trial(g.size());
            bool above_one = true;
            for (std::size_t i = 0; i < trial.size(); ++i) {
                trial[i] = state.phi.phi()[i] + step * delta[static_cast<Eigen::Index>(i)];
                above_one = above_one && trial[i] > 1.0;
            }
            if (above_one) {
                try {
                    SupportFunction candidate(sphere::even_project(ScalarField(spec.grid(), std::move(trial))));
                    ScalarField rc = residual(spec, candidate, t);
                    const double norm = linf(rc);
                    if (norm < state.residual_norm) {
                        state.phi = std::move(candidate);
                        r = std::move(rc);
                        state.residual_norm = norm;
                        break;
                    }
                } catch (const ConeViolation&) {
                    // outside the elliptic cone; shrink the step
                }
            }
            step *= 0.5;
        }
        ++state.newton_iters;
        state.converged = state.residual_norm <= opts.tol;
    }

    const horo::AField a = horo::build_A(state.phi);
    state.min_eig_A = horo::min_eigenvalue(a);
    state.max_eig_A = horo::max_eigenvalue(a);
    return state;
}

ContinuationState continuation_solve(const ProblemSpec& spec, const ContinuationOptions& opts) {
    if (opts.steps < 1) throw ArgumentError("continuation needs at least one step");
    const double c = constant_solution(spec.n, spec.k, spec.gamma);
    ContinuationState current = make_state(spec, SupportFunction(ScalarField(spec.grid(), c)), 0.0);
    try {
        current = newton_solve(spec, current, opts.newton);
    } catch (const NonConvergence& e) {
        throw ContinuationFailure(std::string("no converged start at t = 0: ") + e.what(), current);
    }
    std::vector<StepRecord> history{{0.0, current.newton_iters, current.residual_norm}};
    int total_iters = current.newton_iters;

    double dt = 1.0 / opts.steps;
    while (current.t < 1.0) {
        const double target = std::min(1.0, current.t + dt);
        ContinuationState trial = current;
        trial.t = target;
        try {
            trial = newton_solve(spec, std::move(trial), opts.newton);
        } catch (const NonConvergence&) {
            trial.converged = false;
        } catch (const ConeViolation&) {
            trial.converged = false;
        }
        if (!trial.converged) {
            dt *= 0.5;
            if (dt < opts.min_dt) {
                current.step_history = history;
                current.newton_iters = total_iters;
                throw ContinuationFailure("continuation step underflow at t = " + std::to_string(current.t), current);
            }
            continue;
        }
        history.push_back({trial.t, trial.newton_iters, trial.residual_norm});
        total_iters += trial.newton_iters;
        if (trial.newton_iters <= 3) dt *= 1.5;
        current = std::move(trial);
    }
    current.step_history = std::move(history);
    current.newton_iters = total_iters;
    return current;
}

double choose_gamma(const ScalarField& f) {
    std::vector<double> logs(f.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (!(f[i] > 0.0)) throw ArgumentError("choose_gamma: f must be positive");
        logs[i] = std::log(f[i]);
    }
    const ScalarField lf(f.grid(), std::move(logs));
    return std::exp(sphere::integrate(lf) / f.grid()->area());
}

double g_function(double x, int k) {
    return std::pow(x, 2 * k) * std::pow(0.5, k) * std::pow(1.0 - 1.0 / (x * x), k);
}

double g_inverse(double y, int k) {
    if (!(y >= 0.0)) throw ArgumentError("g_inverse: y must be nonnegative");
    double lo = 1.0;
    double hi = 1e10;
    while (hi - lo > 1e-12 * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        (g_function(mid, k) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Bounds apriori_bounds(const ProblemSpec& spec) {
    const double scale = symfunc::binomial(spec.n, spec.k);
    // At the maximum of phi: g(max phi) >= C(n,k) min f; at the minimum: g(min phi) <= C(n,k) max f.
    const double max_floor = g_inverse(scale * spec.f.min(), spec.k);
    const double min_ceiling = g_inverse(scale * spec.f.max(), spec.k);
    // min phi >= (max phi + 1/max phi)/2 turns both into two-sided bounds.
    return {0.5 * (max_floor + 1.0 / max_floor), min_ceiling + std::sqrt(min_ceiling * min_ceiling - 1.0)};
}

double midpoint_check(const SupportFunction& phi) {
    const double hi = phi.phi().max();
    return phi.phi().min() - 0.5 * (hi + 1.0 / hi);
}

double discretization_slack(const sphere::SphereGrid& grid) {
    const double h = grid.spacing();
    return 10.0 * h * h;
}

}  // namespace hconvex::solver
