#include "hconvex/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex::sphere {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseOp assemble(std::size_t n, const Triplets& t) {
    SparseOp op(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    op.setFromTriplets(t.begin(), t.end());
    op.makeCompressed();
    return op;
}

void add(Triplets& t, std::size_t row, std::size_t col, double v) {
    if (v != 0.0) t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), v);
}

}  // namespace

FittedWeights FittedWeights::for_step(double h) {
    const double s = std::sin(0.5 * h);
    return {1.0 / (2.0 * std::sin(h)), 1.0 / (4.0 * s * s)};
}

std::shared_ptr<const SphereGrid> SphereGrid::build(int n, int n_theta, int n_phi) {
    if (n != 1 && n != 2) throw ArgumentError("sphere dimension must be 1 or 2, got " + std::to_string(n));
    if (n_phi % 2 != 0) throw ArgumentError("n_phi must be even for an exact antipodal map");
    if (n_phi < 8) throw ArgumentError("n_phi must be at least 8");
    if (n == 2 && n_theta < 8) throw ArgumentError("n_theta must be at least 8");

    std::shared_ptr<SphereGrid> g(new SphereGrid());
    g->n_ = n;
    g->n_theta_ = n == 2 ? n_theta : 1;
    g->n_phi_ = n_phi;
    g->step_phi_ = 2.0 * std::numbers::pi / n_phi;
    g->step_theta_ = n == 2 ? std::numbers::pi / n_theta : g->step_phi_;

    const std::size_t count = static_cast<std::size_t>(g->n_theta_) * static_cast<std::size_t>(n_phi);
    g->nodes_.resize(count);
    g->frame_.resize(count);
    g->weights_.resize(count);
    g->theta_.resize(count);
    g->longitude_.resize(count);
    g->antipode_.resize(count);

    for (int i = 0; i < g->n_theta_; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const std::size_t p = g->index(i, j);
            const double lon = g->step_phi_ * j;
            if (n == 1) {
                g->theta_[p] = lon;
                g->nodes_[p] = {std::cos(lon), std::sin(lon), 0.0};
                g->frame_[p] = {Vec3{-std::sin(lon), std::cos(lon), 0.0}, Vec3{0.0, 0.0, 0.0}};
                g->weights_[p] = g->step_phi_;
                g->antipode_[p] = g->index(0, (j + n_phi / 2) % n_phi);
            } else {
                const double th = (i + 0.5) * g->step_theta_;
                const double st = std::sin(th);
                const double ct = std::cos(th);
                const double sp = std::sin(lon);
                const double cp = std::cos(lon);
                g->theta_[p] = th;
                g->longitude_[p] = lon;
                g->nodes_[p] = {st * cp, st * sp, ct};
                g->frame_[p] = {Vec3{ct * cp, ct * sp, -st}, Vec3{-sp, cp, 0.0}};
                g->weights_[p] = st * g->step_theta_ * g->step_phi_;
                g->antipode_[p] = g->index(n_theta - 1 - i, (j + n_phi / 2) % n_phi);
            }
        }
    }
    double area = 0.0;
    for (double w : g->weights_) area += w;
    g->area_ = area;
    g->build_ops();
    return g;
}

double SphereGrid::spacing() const noexcept { return std::max(step_theta_, step_phi_); }

std::size_t SphereGrid::wrap(int i, int j) const {
    if (n_ == 2) {
        if (i < 0) {
            i = -1 - i;
            j += n_phi_ / 2;
        } else if (i >= n_theta_) {
            i = 2 * n_theta_ - 1 - i;
            j += n_phi_ / 2;
        }
    } else {
        i = 0;
    }
    j = ((j % n_phi_) + n_phi_) % n_phi_;
    return index(i, j);
}

void SphereGrid::build_ops() {
    const std::size_t count = size();
    const FittedWeights wp = FittedWeights::for_step(step_phi_);
    Triplets t1, t2, t11, t12, t22;

    if (n_ == 1) {
        for (int j = 0; j < n_phi_; ++j) {
            const std::size_t p = index(0, j);
            const std::size_t e = wrap(0, j + 1);
            const std::size_t w = wrap(0, j - 1);
            add(t1, p, e, wp.first);
            add(t1, p, w, -wp.first);
            add(t11, p, e, wp.second);
            add(t11, p, w, wp.second);
            add(t11, p, p, -2.0 * wp.second);
        }
        ops_.d1 = assemble(count, t1);
        ops_.d11 = assemble(count, t11);
        return;
    }

    const FittedWeights wt = FittedWeights::for_step(step_theta_);
    for (int i = 0; i < n_theta_; ++i) {
        const double th = (i + 0.5) * step_theta_;
        const double s = std::sin(th);
        const double cot = std::cos(th) / s;
        for (int j = 0; j < n_phi_; ++j) {
            const std::size_t p = index(i, j);
            const std::size_t up = wrap(i + 1, j);
            const std::size_t dn = wrap(i - 1, j);
            const std::size_t east = wrap(i, j + 1);
            const std::size_t west = wrap(i, j - 1);

            // phi_theta, phi_lon
            add(t1, p, up, wt.first);
            add(t1, p, dn, -wt.first);
            add(t2, p, east, wp.first / s);
            add(t2, p, west, -wp.first / s);

            add(t11, p, up, wt.second);
            add(t11, p, dn, wt.second);
            add(t11, p, p, -2.0 * wt.second);

            // (phi_{theta lon} - cot phi_lon) / sin
            const double mixed = wt.first * wp.first / s;
            add(t12, p, wrap(i + 1, j + 1), mixed);
            add(t12, p, wrap(i + 1, j - 1), -mixed);
            add(t12, p, wrap(i - 1, j + 1), -mixed);
            add(t12, p, wrap(i - 1, j - 1), mixed);
            add(t12, p, east, -cot * wp.first / s);
            add(t12, p, west, cot * wp.first / s);

            // phi_{lon lon} / sin^2 + cot phi_theta
            const double lon2 = wp.second / (s * s);
            add(t22, p, east, lon2);
            add(t22, p, west, lon2);
            add(t22, p, p, -2.0 * lon2);
            add(t22, p, up, cot * wt.first);
            add(t22, p, dn, -cot * wt.first);
        }
    }
    ops_.d1 = assemble(count, t1);
    ops_.d2 = assemble(count, t2);
    ops_.d11 = assemble(count, t11);
    ops_.d12 = assemble(count, t12);
    ops_.d22 = assemble(count, t22);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ArgumentError("ScalarField: null grid");
    if (values_.size() != grid_->size()) {
        throw ArgumentError("ScalarField: " + std::to_string(values_.size()) + " values for " +
                            std::to_string(grid_->size()) + " nodes");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ArgumentError("ScalarField: non-finite value");
    }
}

ScalarField::ScalarField(GridPtr grid, double value)
    : ScalarField(grid, std::vector<double>(grid ? grid->size() : 0, value)) {}

Eigen::Map<const Eigen::VectorXd> ScalarField::vec() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

/// op * v with every row applied to v - v[row]. The operators annihilate
/// constants, so this gives exact zeros on constant fields and keeps the
/// large polar weights from multiplying the magnitude of v.
Eigen::VectorXd apply_centered(const SparseOp& op, const ScalarField& field) {
    Eigen::VectorXd out(op.rows());
    for (Eigen::Index row = 0; row < op.outerSize(); ++row) {
        const double centre = field[static_cast<std::size_t>(row)];
        double acc = 0.0;
        for (SparseOp::InnerIterator it(op, row); it; ++it) acc += it.value() * (field[static_cast<std::size_t>(it.col())] - centre);
        out[row] = acc;
    }
    return out;
}

}  // namespace

FrameDerivatives derivatives(const ScalarField& field) {
    const SphereGrid& g = *field.grid();
    const DifferenceOps& ops = g.ops();
    const std::size_t count = g.size();
    FrameDerivatives out;
    out.grad.resize(count);
    out.hess.assign(count, symfunc::SymMatrix(g.dim()));

    const Eigen::VectorXd g1 = apply_centered(ops.d1, field);
    const Eigen::VectorXd h11 = apply_centered(ops.d11, field);
    if (g.dim() == 1) {
        for (std::size_t p = 0; p < count; ++p) {
            const auto e = static_cast<Eigen::Index>(p);
            out.grad[p] = {g1[e], 0.0};
            out.hess[p](0, 0) = h11[e];
        }
        return out;
    }
    const Eigen::VectorXd g2 = apply_centered(ops.d2, field);
    const Eigen::VectorXd h12 = apply_centered(ops.d12, field);
    const Eigen::VectorXd h22 = apply_centered(ops.d22, field);
    for (std::size_t p = 0; p < count; ++p) {
        const auto e = static_cast<Eigen::Index>(p);
        out.grad[p] = {g1[e], g2[e]};
        out.hess[p](0, 0) = h11[e];
        out.hess[p](0, 1) = h12[e];
        out.hess[p](1, 1) = h22[e];
    }
    return out;
}

ScalarField laplacian(const ScalarField& field) {
    const DifferenceOps& ops = field.grid()->ops();
    Eigen::VectorXd lap = apply_centered(ops.d11, field);
    if (field.grid()->dim() == 2) lap += apply_centered(ops.d22, field);
    return ScalarField(field.grid(), std::vector<double>(lap.data(), lap.data() + lap.size()));
}

ScalarField even_project(const ScalarField& field) {
    const SphereGrid& g = *field.grid();
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = 0.5 * (field[i] + field[g.antipode(i)]);
    }
    return ScalarField(field.grid(), std::move(out));
}

double integrate(const ScalarField& field) {
    const SphereGrid& g = *field.grid();
    double total = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) total += field[i] * g.weight(i);
    return total;
}

double evenness_defect(const ScalarField& field) {
    const SphereGrid& g = *field.grid();
    double d = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) d = std::max(d, std::abs(field[i] - field[g.antipode(i)]));
    return d;
}

Vec3 frame_to_ambient(const SphereGrid& grid, std::size_t node, double a, double b) {
    const auto& f = grid.frame(node);
    return {a * f[0][0] + b * f[1][0], a * f[0][1] + b * f[1][1], a * f[0][2] + b * f[1][2]};
}

}  // namespace hconvex::sphere
