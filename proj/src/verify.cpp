#include "hconvex/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex::verify {

namespace {

using horo::minkowski;

LorentzVec combine(double a, const LorentzVec& x, double b, const LorentzVec& y) {
    LorentzVec out;
    for (std::size_t c = 0; c < 3; ++c) out.space[c] = a * x.space[c] + b * y.space[c];
    out.time = a * x.time + b * y.time;
    return out;
}

LorentzVec scaled(double s, const LorentzVec& x) { return combine(s, x, 0.0, x); }

/// Differences are formed before scaling so the large stencil weights only see small numbers.
LorentzVec first_difference(double w, const LorentzVec& plus, const LorentzVec& minus) {
    return scaled(w, combine(1.0, plus, -1.0, minus));
}

LorentzVec second_difference(double w, const LorentzVec& plus, const LorentzVec& mid, const LorentzVec& minus) {
    return scaled(w, combine(1.0, combine(1.0, plus, -1.0, mid), -1.0, combine(1.0, mid, -1.0, minus)));
}

/// Coordinate derivatives of the embedding at one node.
struct LocalJet {
    LorentzVec t1, t2;         // d/dtheta, d/dlon (t2 unused for n = 1)
    LorentzVec x11, x12, x22;  // second coordinate derivatives
};

LocalJet jet(const HyperboloidPatch& patch, std::size_t p) {
    const sphere::SphereGrid& g = *patch.grid;
    const auto& X = patch.points;
    const auto wp = sphere::FittedWeights::for_step(g.step_phi());
    LocalJet j;
    if (g.dim() == 1) {
        const int c = static_cast<int>(p);
        const LorentzVec& e = X[g.wrap(0, c + 1)];
        const LorentzVec& w = X[g.wrap(0, c - 1)];
        j.t1 = first_difference(wp.first, e, w);
        j.x11 = second_difference(wp.second, e, X[p], w);
        return j;
    }
    const auto wt = sphere::FittedWeights::for_step(g.step_theta());
    const int row = static_cast<int>(p) / g.n_phi();
    const int col = static_cast<int>(p) % g.n_phi();
    const LorentzVec& up = X[g.wrap(row + 1, col)];
    const LorentzVec& dn = X[g.wrap(row - 1, col)];
    const LorentzVec& east = X[g.wrap(row, col + 1)];
    const LorentzVec& west = X[g.wrap(row, col - 1)];
    j.t1 = first_difference(wt.first, up, dn);
    j.t2 = first_difference(wp.first, east, west);
    j.x11 = second_difference(wt.second, up, X[p], dn);
    j.x22 = second_difference(wp.second, east, X[p], west);
    const LorentzVec a = combine(1.0, X[g.wrap(row + 1, col + 1)], -1.0, X[g.wrap(row + 1, col - 1)]);
    const LorentzVec b = combine(1.0, X[g.wrap(row - 1, col + 1)], -1.0, X[g.wrap(row - 1, col - 1)]);
    j.x12 = scaled(wt.first * wp.first, combine(1.0, a, -1.0, b));
    return j;
}

double det3(const std::array<double, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

/// Euclidean vector orthogonal to the rows; coordinates ordered (space..., time).
std::array<double, 4> complement(const std::vector<std::array<double, 4>>& rows, int dim) {
    if (dim == 3) {
        const auto& a = rows[0];
        const auto& b = rows[1];
        return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0], 0.0};
    }
    std::array<double, 4> w{};
    for (int skip = 0; skip < 4; ++skip) {
        std::array<double, 9> minor{};
        int idx = 0;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (c != skip) minor[static_cast<std::size_t>(idx++)] = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        }
        w[static_cast<std::size_t>(skip)] = (skip % 2 == 0 ? 1.0 : -1.0) * det3(minor);
    }
    return w;
}

std::array<double, 4> packed(const LorentzVec& v, int n) {
    // n = 1 uses (x, y, t); n = 2 uses (x, y, z, t).
    if (n == 1) return {v.space[0], v.space[1], v.time, 0.0};
    return {v.space[0], v.space[1], v.space[2], v.time};
}

}  // namespace

bool CurvatureReport::all_monitors_pass() const {
    return std::all_of(monitors.begin(), monitors.end(), [](const Monitor& m) { return m.pass; });
}

ShiftedCurvatures measure_curvatures(const HyperboloidPatch& patch, int k) {
    const sphere::SphereGrid& g = *patch.grid;
    const int n = g.dim();
    if (k < 1 || k > n) throw ArgumentError("measure_curvatures: k out of range");
    std::vector<symfunc::Eigenvalues> kt(patch.points.size());
    for (std::size_t p = 0; p < patch.points.size(); ++p) {
        const LocalJet j = jet(patch, p);
        const LorentzVec& nu = patch.normals[p];
        if (n == 1) {
            const double metric = minkowski(j.t1, j.t1);
            if (!(metric > 0.0)) throw GeometryError("degenerate induced metric at node " + std::to_string(p));
            kt[p] = {-minkowski(j.x11, nu) / metric - 1.0};
            continue;
        }
        const double g11 = minkowski(j.t1, j.t1);
        const double g12 = minkowski(j.t1, j.t2);
        const double g22 = minkowski(j.t2, j.t2);
        const double h11 = -minkowski(j.x11, nu);
        const double h12 = -minkowski(j.x12, nu);
        const double h22 = -minkowski(j.x22, nu);
        const double det_g = g11 * g22 - g12 * g12;
        if (!(det_g > 0.0)) throw GeometryError("degenerate induced metric at node " + std::to_string(p));
        // Roots of det(h - kappa g) = 0.
        const double b = (g11 * h22 + g22 * h11 - 2.0 * g12 * h12) / det_g;
        const double c = (h11 * h22 - h12 * h12) / det_g;
        const double disc = std::sqrt(std::max(0.0, 0.25 * b * b - c));
        kt[p] = {0.5 * b - disc - 1.0, 0.5 * b + disc - 1.0};
    }
    return horo::curvatures_from_values(std::move(kt), k);
}

std::vector<LorentzVec> fd_normals(const HyperboloidPatch& patch) {
    const sphere::SphereGrid& g = *patch.grid;
    const int n = g.dim();
    std::vector<LorentzVec> out(patch.points.size());
    for (std::size_t p = 0; p < out.size(); ++p) {
        const LocalJet j = jet(patch, p);
        std::vector<std::array<double, 4>> rows{packed(patch.points[p], n), packed(j.t1, n)};
        if (n == 2) rows.push_back(packed(j.t2, n));
        const std::array<double, 4> w = complement(rows, n + 2);
        // Raising the time index turns Euclidean orthogonality into Minkowski orthogonality.
        LorentzVec v;
        if (n == 1) {
            v.space = {w[0], w[1], 0.0};
            v.time = -w[2];
        } else {
            v.space = {w[0], w[1], w[2]};
            v.time = -w[3];
        }
        const double norm2 = minkowski(v, v);
        if (!(norm2 > 0.0)) throw GeometryError("finite-difference normal is not spacelike at node " + std::to_string(p));
        double s = 1.0 / std::sqrt(norm2);
        if (minkowski(v, patch.normals[p]) < 0.0) s = -s;
        out[p] = scaled(s, v);
    }
    return out;
}

CurvatureReport compare(const ShiftedCurvatures& measured, const solver::ProblemSpec& spec,
                        const SupportFunction& sf, const HyperboloidPatch& patch) {
    const sphere::GridPtr& grid = spec.grid();
    if (sf.grid() != grid || patch.grid != grid || measured.h_tilde_k.size() != grid->size()) {
        throw ArgumentError("compare: inputs are defined on different grids");
    }
    if (measured.k != spec.k) throw ArgumentError("compare: curvature order differs from the problem");

    CurvatureReport rep;
    rep.h_tilde_k_measured = ScalarField(grid, measured.h_tilde_k);
    rep.h_tilde_k_prescribed = spec.f_tilde;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < grid->size(); ++p) {
        const double target = spec.f_tilde[p];
        const double diff = measured.h_tilde_k[p] - target;
        rep.linf_rel_error = std::max(rep.linf_rel_error, std::abs(diff) / target);
        num += grid->weight(p) * diff * diff;
        den += grid->weight(p) * target * target;
    }
    rep.l2_rel_error = std::sqrt(num / den);
    rep.min_kappa_tilde = measured.min_kappa_tilde();

    const double slack = solver::discretization_slack(*grid);
    const solver::Bounds bounds = solver::apriori_bounds(spec);
    const double bracket = std::min(sf.phi().min() - bounds.phi_low, bounds.phi_high - sf.phi().max());
    const double midpoint = solver::midpoint_check(sf);
    const double hyperboloid = horo::hyperboloid_defect(patch);
    const double evenness = sphere::evenness_defect(sf.phi());

    rep.monitors = {
        {"kappa_tilde_positive", rep.min_kappa_tilde, 0.0, rep.min_kappa_tilde > 0.0},
        {"midpoint_check", midpoint, -slack, midpoint >= -slack},
        {"apriori_bounds", bracket, -slack, bracket >= -slack},
        {"hyperboloid_identity", hyperboloid, 1e-12, hyperboloid <= 1e-12},
        {"evenness_defect", evenness, 1e-12, evenness <= 1e-12},
    };
    return rep;
}

double weingarten_crosscheck(const SupportFunction& sf) {
    const auto w = horo::shifted_weingarten(sf, horo::build_A(sf));
    const ShiftedCurvatures measured = measure_curvatures(horo::embed(sf), 1);
    double worst = 0.0;
    for (std::size_t p = 0; p < w.size(); ++p) {
        const symfunc::Eigenvalues ev = symfunc::eigenvalues(w[p]);
        for (int i = 0; i < ev.size(); ++i) worst = std::max(worst, std::abs(ev[i] - measured.kappa_tilde[p][i]));
    }
    return worst;
}

}  // namespace hconvex::verify
