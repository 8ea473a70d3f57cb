#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hconvex/errors.hpp"
#include "hconvex/sphere.hpp"

using namespace hconvex;
using namespace hconvex::sphere;

namespace {

constexpr double kPi = std::numbers::pi;

double p2(const Vec3& x) { return 0.5 * (3.0 * x[2] * x[2] - 1.0); }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Exact covariant Hessian of P2(x3) on S^2 in the frame at node i:
/// Hess = 3 (e3^T)(e3^T)^T - 3 x3^2 g, with e3^T the tangential part of e3.
symfunc::SymMatrix p2_hessian(const SphereGrid& g, std::size_t i) {
    const auto& fr = g.frame(i);
    const Vec3 e3{0.0, 0.0, 1.0};
    const double a = dot(fr[0], e3), b = dot(fr[1], e3);
    const double v = 3.0 * g.node(i)[2] * g.node(i)[2];
    symfunc::SymMatrix h(2);
    h(0, 0) = 3.0 * a * a - v;
    h(0, 1) = 3.0 * a * b;
    h(1, 1) = 3.0 * b * b - v;
    return h;
}

double p2_hessian_error(int n_theta) {
    const GridPtr g = SphereGrid::build(2, n_theta, 2 * n_theta);
    const FrameDerivatives d = derivatives(ScalarField::from_function(g, p2));
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const symfunc::SymMatrix exact = p2_hessian(*g, i);
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) err = std::max(err, std::abs(d.hess[i](a, b) - exact(a, b)));
    }
    return err;
}

}  // namespace

TEST_CASE("grid construction") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    CHECK(g->size() == 512);
    CHECK(g->theta(g->index(0, 0)) == doctest::Approx(kPi / 32.0));
    for (std::size_t i = 0; i < g->size(); ++i) {
        const Vec3& x = g->node(i);
        CHECK(std::abs(dot(x, x) - 1.0) < 1e-15);
        CHECK(g->theta(i) > 0.0);
        CHECK(g->theta(i) < kPi);
    }

    const GridPtr c = SphereGrid::build(1, 0, 64);
    CHECK(c->size() == 64);
    for (std::size_t i = 0; i < c->size(); ++i) {
        CHECK(c->node(i)[2] == 0.0);
        CHECK(c->weight(i) == doctest::Approx(2.0 * kPi / 64.0));
    }

    CHECK_THROWS_AS((void)SphereGrid::build(2, 16, 31), ArgumentError);
    CHECK_THROWS_AS((void)SphereGrid::build(3, 16, 32), ArgumentError);
    CHECK_THROWS_AS((void)SphereGrid::build(2, 4, 32), ArgumentError);
}

TEST_CASE("antipodal map is an exact involution") {
    for (int n = 1; n <= 2; ++n) {
        const GridPtr g = SphereGrid::build(n, 16, 32);
        for (std::size_t i = 0; i < g->size(); ++i) {
            const std::size_t j = g->antipode(i);
            CHECK(j != i);
            CHECK(g->antipode(j) == i);
            for (int c = 0; c < 3; ++c) CHECK(std::abs(g->node(j)[c] + g->node(i)[c]) < 1e-14);
        }
    }
}

TEST_CASE("quadrature weights") {
    for (int nt : {8, 16, 32, 64}) {
        const GridPtr g = SphereGrid::build(2, nt, 2 * nt);
        double sum = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            CHECK(g->weight(i) > 0.0);
            sum += g->weight(i);
        }
        // Midpoint rule on sin(theta): 4 pi x / sin(x) with x = pi / (2 nt).
        const double x = kPi / (2.0 * nt);
        CHECK(sum == doctest::Approx(4.0 * kPi * x / std::sin(x)).epsilon(1e-13));
        CHECK(std::abs(sum - 4.0 * kPi) / (4.0 * kPi) <= 10.0 / (nt * nt));
        if (nt >= 32) CHECK(std::abs(sum - 4.0 * kPi) / (4.0 * kPi) <= 1e-3);
        CHECK(g->area() == doctest::Approx(sum));
    }
}

TEST_CASE("wrap across the poles") {
    const GridPtr g = SphereGrid::build(2, 8, 16);
    CHECK(g->wrap(-1, 3) == g->index(0, 11));
    CHECK(g->wrap(8, 3) == g->index(7, 11));
    CHECK(g->wrap(2, -1) == g->index(2, 15));
    CHECK(g->wrap(2, 16) == g->index(2, 0));
}

TEST_CASE("fitted weights") {
    const double h = 0.1;
    const FittedWeights w = FittedWeights::for_step(h);
    CHECK(w.first == doctest::Approx(1.0 / (2.0 * std::sin(h))));
    CHECK(w.second == doctest::Approx(1.0 / (4.0 * std::sin(h / 2) * std::sin(h / 2))));
    // Exact on cos and sin, close to the plain weights.
    CHECK(w.first * (std::sin(0.3 + h) - std::sin(0.3 - h)) == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
    CHECK(w.second * (std::cos(0.3 + h) - 2 * std::cos(0.3) + std::cos(0.3 - h)) ==
          doctest::Approx(-std::cos(0.3)).epsilon(1e-14));
    CHECK(std::abs(w.first * 2.0 * h - 1.0) < h * h);
}

TEST_CASE("derivatives of constants and linear functions") {
    const GridPtr g = SphereGrid::build(2, 32, 64);
    const FrameDerivatives dc = derivatives(ScalarField(g, 3.7));
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(dc.grad[i][0] == 0.0);
        CHECK(dc.grad[i][1] == 0.0);
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) CHECK(dc.hess[i](a, b) == 0.0);
    }

    const Vec3 e = {0.6, 0.0, 0.8};
    const FrameDerivatives dl = derivatives(ScalarField::from_function(g, [&](const Vec3& x) { return dot(x, e); }));
    double grad_err = 0.0, hess_err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto& fr = g->frame(i);
        grad_err = std::max(grad_err, std::abs(dl.grad[i][0] - dot(fr[0], e)));
        grad_err = std::max(grad_err, std::abs(dl.grad[i][1] - dot(fr[1], e)));
        const double v = dot(g->node(i), e);
        hess_err = std::max(hess_err, std::abs(dl.hess[i](0, 0) + v));
        hess_err = std::max(hess_err, std::abs(dl.hess[i](1, 1) + v));
        hess_err = std::max(hess_err, std::abs(dl.hess[i](0, 1)));
    }
    CHECK(grad_err < 1e-10);
    CHECK(hess_err < 1e-10);

    // Delta + n annihilates coordinate functions.
    for (int c = 0; c < 3; ++c) {
        const ScalarField xc = ScalarField::from_function(g, [c](const Vec3& x) { return x[c]; });
        const ScalarField lap = laplacian(xc);
        double worst = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) worst = std::max(worst, std::abs(lap[i] + 2.0 * xc[i]));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("derivatives on the circle") {
    const GridPtr g = SphereGrid::build(1, 0, 128);
    const ScalarField f = ScalarField::from_function(g, [](const Vec3& x) { return 2.0 * x[0] * x[0] - 1.0; });
    const FrameDerivatives d = derivatives(f);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double t = g->theta(i);
        err = std::max(err, std::abs(d.grad[i][0] + 2.0 * std::sin(2.0 * t)));
        err = std::max(err, std::abs(d.hess[i](0, 0) + 4.0 * std::cos(2.0 * t)));
    }
    CHECK(err < 4.0 * 0.01);
}

TEST_CASE("second-order convergence of the Hessian on P2") {
    const double e16 = p2_hessian_error(16);
    const double e32 = p2_hessian_error(32);
    const double e64 = p2_hessian_error(64);
    MESSAGE("P2 Hessian errors " << e16 << " " << e32 << " " << e64);
    CHECK(e32 < e16);
    CHECK(e32 / e64 >= 3.5);
    CHECK(e32 / e64 <= 4.5);

    const GridPtr g = SphereGrid::build(2, 64, 128);
    const ScalarField lap = laplacian(ScalarField::from_function(g, p2));
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(lap[i] + 6.0 * p2(g->node(i))));
    CHECK(err < 1e-2);
}

TEST_CASE("even projection") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    const ScalarField odd = ScalarField::from_function(g, [](const Vec3& x) { return x[0] + x[1] * x[2] * x[0]; });
    const ScalarField even = ScalarField::from_function(g, [](const Vec3& x) { return 1.0 + x[2] * x[2] + x[0] * x[1]; });
    CHECK(even_project(odd).max_abs() < 1e-15);
    CHECK(evenness_defect(even) < 1e-15);
    CHECK(evenness_defect(odd) > 0.1);

    std::vector<double> mixed(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) mixed[i] = odd[i] + even[i];
    const ScalarField p = even_project(ScalarField(g, mixed));
    const ScalarField pp = even_project(p);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(std::abs(p[i] - even[i]) < 1e-14);
        CHECK(pp[i] == p[i]);
    }
}

TEST_CASE("integration") {
    const GridPtr g = SphereGrid::build(2, 64, 128);
    CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(g->area()));
    const double x2 = integrate(ScalarField::from_function(g, [](const Vec3& x) { return x[2] * x[2]; }));
    CHECK(std::abs(x2 - 4.0 * kPi / 3.0) / (4.0 * kPi / 3.0) < 1e-3);
    CHECK(std::abs(integrate(ScalarField::from_function(g, [](const Vec3& x) { return x[0]; }))) < 1e-13);
}

TEST_CASE("field validation") {
    const GridPtr g = SphereGrid::build(1, 0, 16);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(15, 1.0)), ArgumentError);
    std::vector<double> bad(16, 1.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField(g, bad), ArgumentError);
    CHECK_THROWS_AS(ScalarField(nullptr, 1.0), ArgumentError);
}

TEST_CASE("frame is orthonormal and tangent") {
    const GridPtr g = SphereGrid::build(2, 16, 32);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto& fr = g->frame(i);
        CHECK(std::abs(dot(fr[0], fr[0]) - 1.0) < 1e-14);
        CHECK(std::abs(dot(fr[1], fr[1]) - 1.0) < 1e-14);
        CHECK(std::abs(dot(fr[0], fr[1])) < 1e-14);
        CHECK(std::abs(dot(fr[0], g->node(i))) < 1e-14);
        const Vec3 v = frame_to_ambient(*g, i, 2.0, -1.0);
        CHECK(std::abs(dot(v, fr[0]) - 2.0) < 1e-14);
        CHECK(std::abs(dot(v, fr[1]) + 1.0) < 1e-14);
    }
}
