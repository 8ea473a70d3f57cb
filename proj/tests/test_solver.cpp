#include <doctest.h>

#include <cmath>
#include <random>

#include "hconvex/errors.hpp"
#include "hconvex/solver.hpp"

using namespace hconvex;
using namespace hconvex::solver;
using sphere::SphereGrid;
using sphere::Vec3;

namespace {

double p2(const Vec3& x) { return 0.5 * (3.0 * x[2] * x[2] - 1.0); }

ProblemSpec constant_problem(const GridPtr& g, int k, double f_tilde) {
    return make_problem(ScalarField(g, f_tilde), k);
}

ScalarField random_even(const GridPtr& g, std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> c(-amp, amp);
    const double a = c(rng), b = c(rng), d = c(rng), e = c(rng);
    return sphere::even_project(ScalarField::from_function(g, [&](const Vec3& x) {
        return a * x[0] * x[0] + b * x[1] * x[2] + d * x[2] * x[2] * x[2] * x[2] + e * x[0] * x[1];
    }));
}

ScalarField add(const ScalarField& a, const ScalarField& b, double s) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + s * b[i];
    return ScalarField(a.grid(), std::move(v));
}

/// Relative error of J v against a central difference of the residual.
double probe_error(const ProblemSpec& spec, const SupportFunction& phi, const ScalarField& v, double t) {
    const double eps = 1e-7;
    const Eigen::VectorXd jv = jacobian(spec, phi, t) * v.vec();
    const ScalarField rp = residual(spec, SupportFunction(add(phi.phi(), v, eps)), t);
    const ScalarField rm = residual(spec, SupportFunction(add(phi.phi(), v, -eps)), t);
    const Eigen::VectorXd fd = (rp.vec() - rm.vec()) / (2.0 * eps);
    return (jv - fd).lpNorm<Eigen::Infinity>() / std::max(1e-12, fd.lpNorm<Eigen::Infinity>());
}

}  // namespace

TEST_CASE("constant solutions") {
    CHECK(constant_solution(2, 1, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(constant_solution(2, 2, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(constant_solution(2, 1, 0.5) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(constant_solution(1, 1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS((void)constant_solution(2, 1, 0.0), ArgumentError);
    CHECK_THROWS_AS((void)constant_solution(2, 3, 1.0), ArgumentError);

    for (int n = 1; n <= 2; ++n) {
        const GridPtr g = SphereGrid::build(n, 16, 32);
        for (int k = 1; k <= n; ++k) {
            for (double gamma : {0.3, 1.0, 2.5}) {
                const ProblemSpec spec = constant_problem(g, k, 1.0 / gamma);
                CHECK(spec.gamma == doctest::Approx(gamma).epsilon(1e-13));
                const SupportFunction phi(ScalarField(g, constant_solution(n, k, gamma)));
                for (double t : {0.0, 0.5, 1.0}) CHECK(residual(spec, phi, t).max_abs() < 1e-14);
            }
        }
    }
}

TEST_CASE("make_problem validation") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    CHECK_THROWS_AS((void)make_problem(ScalarField(g, -1.0), 1), ArgumentError);
    CHECK_THROWS_AS((void)make_problem(ScalarField(g, 1.0), 3), ArgumentError);
    CHECK_THROWS_AS((void)make_problem(ScalarField::from_function(g, [](const Vec3& x) { return 1.0 + 0.1 * x[0]; }), 1),
                    ArgumentError);
    const ProblemSpec spec = make_problem(ScalarField(g, 2.0), 2, 0.7);
    CHECK(spec.gamma == 0.7);
    CHECK(spec.f[0] == doctest::Approx(0.5));
    CHECK(spec.n == 2);
}

TEST_CASE("residual rejects non-convex support functions") {
    const GridPtr g = SphereGrid::build(1, 0, 64);
    const ProblemSpec spec = constant_problem(g, 1, 1.0);
    const SupportFunction bad(
        ScalarField::from_function(g, [](const Vec3& x) { return 1.2 + 0.15 * std::cos(6.0 * std::atan2(x[1], x[0])); }));
    CHECK_THROWS_AS((void)residual(spec, bad, 1.0), ConeViolation);
}

TEST_CASE("choose_gamma") {
    // f = 1 + 0.3 x3^2: exp of the mean of log(1 + 0.3 s^2) over s in [-1, 1].
    const double exact = 1.096471441023746;
    const GridPtr g = SphereGrid::build(2, 64, 128);
    const ScalarField f = ScalarField::from_function(g, [](const Vec3& x) { return 1.0 + 0.3 * x[2] * x[2]; });
    CHECK(choose_gamma(f) == doctest::Approx(exact).epsilon(1e-4));

    // Monte Carlo over uniform points on the sphere.
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01(0.0, 1.0);
    double acc = 0.0;
    const int samples = 1000000;
    for (int s = 0; s < samples; ++s) {
        const double a = n01(rng), b = n01(rng), c = n01(rng);
        const double z = c / std::sqrt(a * a + b * b + c * c);
        acc += std::log(1.0 + 0.3 * z * z);
    }
    CHECK(std::exp(acc / samples) == doctest::Approx(exact).epsilon(1e-3));

    CHECK(choose_gamma(ScalarField(g, 2.0)) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)choose_gamma(ScalarField(g, 0.0)), ArgumentError);
}

TEST_CASE("Jacobian on constants") {
    const GridPtr g = SphereGrid::build(2, 32, 64);
    const ProblemSpec spec = constant_problem(g, 1, 1.0);
    const double c = std::sqrt(5.0);
    const SupportFunction phi(ScalarField(g, c));
    const SparseOp j = jacobian(spec, phi, 1.0);

    const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g->size()));
    const Eigen::VectorXd j1 = j * one;
    CHECK((j1.array() - c / 2.0).abs().maxCoeff() < 1e-10);

    for (int axis = 0; axis < 3; ++axis) {
        const ScalarField x = ScalarField::from_function(g, [axis](const Vec3& p) { return p[axis]; });
        CHECK((j * x.vec()).lpNorm<Eigen::Infinity>() < 1e-10);
    }

    // Degree-2 modes are not in the kernel.
    const ScalarField q = ScalarField::from_function(g, p2);
    CHECK((j * q.vec()).lpNorm<Eigen::Infinity>() > 0.1);
}

TEST_CASE("Jacobian matches central differences") {
    std::mt19937_64 rng(42);
    for (int n = 1; n <= 2; ++n) {
        const GridPtr g = SphereGrid::build(n, 16, 32);
        for (int k = 1; k <= n; ++k) {
            const ProblemSpec spec = make_problem(
                ScalarField::from_function(g, [](const Vec3& x) { return 1.0 / (1.0 + 0.3 * x[2] * x[2] + 0.2 * x[0] * x[0]); }),
                k);
            for (int trial = 0; trial < 5; ++trial) {
                const ScalarField base = random_even(g, rng, 0.1);
                const SupportFunction phi(add(ScalarField(g, 2.5), base, 1.0));
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                std::vector<double> v(g->size());
                for (double& x : v) x = u(rng);
                CHECK(probe_error(spec, phi, ScalarField(g, v), 0.7) < 1e-5);
            }
        }
    }
}

TEST_CASE("Newton converges quadratically near the constant solution") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ProblemSpec spec = constant_problem(g, 1, 1.0);
    const double c = std::sqrt(5.0);
    ContinuationState s = make_state(spec, SupportFunction(ScalarField(g, 1.01 * c)), 1.0);
    s = newton_solve(spec, s, {});
    CHECK(s.converged);
    CHECK(s.newton_iters <= 6);
    CHECK(s.residual_norm <= 1e-10);
    CHECK(std::abs(s.phi.phi().max() - c) < 1e-9);
    CHECK(std::abs(s.phi.phi().min() - c) < 1e-9);
}

TEST_CASE("Newton recovers a manufactured solution") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const SupportFunction target(ScalarField::from_function(g, [](const Vec3& x) { return 2.5 + 0.15 * p2(x); }));
    const ProblemSpec unit = constant_problem(g, 1, 1.0);
    const ScalarField r = residual(unit, target, 1.0);
    std::vector<double> ft(g->size());
    for (std::size_t i = 0; i < ft.size(); ++i) ft[i] = std::exp(-r[i]);
    const ProblemSpec spec = make_problem(sphere::even_project(ScalarField(g, ft)), 1);

    const ContinuationState s = newton_solve(spec, make_state(spec, SupportFunction(ScalarField(g, 2.5)), 1.0), {});
    CHECK(s.converged);
    CHECK(s.newton_iters <= 25);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
        err = std::max(err, std::abs(s.phi.phi()[i] - target.phi()[i]) / target.phi()[i]);
    CHECK(err <= 1e-6);
}

TEST_CASE("Newton reports non-convergence with the best iterate") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ProblemSpec spec = make_problem(
        ScalarField::from_function(g, [](const Vec3& x) { return 1.0 / (1.0 + 2.0 * x[2] * x[2]); }), 1);
    const ContinuationState start = make_state(spec, SupportFunction(ScalarField(g, 2.0)), 1.0);
    try {
        (void)newton_solve(spec, start, {1e-14, 1});
        FAIL("expected non-convergence");
    } catch (const NonConvergence& e) {
        CHECK(e.best().residual_norm <= start.residual_norm);
    }
}

TEST_CASE("continuation solves an even problem on S^2") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ProblemSpec spec = make_problem(
        ScalarField::from_function(g, [](const Vec3& x) { return 1.0 / (1.0 + 0.3 * x[2] * x[2]); }), 1);
    const ContinuationState s = continuation_solve(spec, {});
    CHECK(s.converged);
    CHECK(s.t == 1.0);
    CHECK(s.residual_norm <= 1e-10);
    CHECK(s.min_eig_A > 0.0);
    CHECK(sphere::evenness_defect(s.phi.phi()) <= 1e-12);
    CHECK_FALSE(s.step_history.empty());
    CHECK(s.step_history.back().t == 1.0);

    const Bounds b = apriori_bounds(spec);
    const double slack = discretization_slack(*g);
    CHECK(s.phi.phi().min() >= b.phi_low - slack);
    CHECK(s.phi.phi().max() <= b.phi_high + slack);
    CHECK(midpoint_check(s.phi) >= -slack);
}

TEST_CASE("continuation failure at the start") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ProblemSpec spec = make_problem(ScalarField(g, 1.0), 1);
    CHECK_THROWS_AS((void)continuation_solve(spec, {4, 1e-4, {1e-18, 2, 0.0}}), ContinuationFailure);
}

TEST_CASE("continuation on the circle with k = 1") {
    const GridPtr g = SphereGrid::build(1, 0, 128);
    const ProblemSpec spec = make_problem(
        ScalarField::from_function(g, [](const Vec3& x) { return 1.0 / (1.0 + 0.5 * x[0] * x[0]); }), 1);
    const ContinuationState s = continuation_solve(spec, {});
    CHECK(s.converged);
    CHECK(s.residual_norm <= 1e-10);
}

TEST_CASE("continuation failure keeps the last good state") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ProblemSpec spec = make_problem(
        ScalarField::from_function(g, [](const Vec3& x) { return 1.0 / (1.0 + 0.3 * x[2] * x[2]); }), 1);
    try {
        (void)continuation_solve(spec, {1, 0.3, {1e-10, 1}});
        FAIL("expected continuation failure");
    } catch (const ContinuationFailure& e) {
        CHECK(e.last_good().t == 0.0);
        CHECK(e.last_good().converged);
        CHECK(e.last_good().phi.phi().min() == doctest::Approx(constant_solution(2, 1, spec.gamma)));
    }
}

TEST_CASE("g and its inverse") {
    CHECK(g_function(1.0, 1) == 0.0);
    CHECK(g_function(std::sqrt(5.0), 1) == doctest::Approx(2.0));
    for (int k = 1; k <= 2; ++k) {
        for (double y : {0.01, 0.5, 2.0, 40.0}) CHECK(g_function(g_inverse(y, k), k) == doctest::Approx(y).epsilon(1e-10));
        double prev = -1.0;
        for (double x = 1.0; x < 5.0; x += 0.25) {
            CHECK(g_function(x, k) > prev);
            prev = g_function(x, k);
        }
    }
    CHECK_THROWS_AS((void)g_inverse(-1.0, 1), ArgumentError);
}

TEST_CASE("a priori bounds bracket the constant solution") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    for (int k = 1; k <= 2; ++k) {
        const ProblemSpec spec = constant_problem(g, k, 0.8);
        const Bounds b = apriori_bounds(spec);
        const double c = constant_solution(2, k, spec.gamma);
        CHECK(b.phi_low == doctest::Approx(0.5 * (c + 1.0 / c)));
        CHECK(b.phi_high == doctest::Approx(c + std::sqrt(c * c - 1.0)));
        CHECK(b.phi_low < c);
        CHECK(b.phi_high > c);
        CHECK(b.phi_low > 1.0);
    }
}

TEST_CASE("midpoint check and slack") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    CHECK(midpoint_check(SupportFunction(ScalarField(g, 2.0))) == doctest::Approx(2.0 - 1.25));
    CHECK(discretization_slack(*g) == doctest::Approx(10.0 * g->spacing() * g->spacing()));
}
