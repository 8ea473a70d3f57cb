#include "hconvex/horo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex::horo {

double minkowski(const LorentzVec& a, const LorentzVec& b) {
    return a.space[0] * b.space[0] + a.space[1] * b.space[1] + a.space[2] * b.space[2] - a.time * b.time;
}

LorentzVec null_direction(const Vec3& x) { return {x, 1.0}; }

SupportFunction::SupportFunction(ScalarField phi) : phi_(std::move(phi)) {
    std::vector<double> u(phi_.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(phi_[i] > 1.0)) {
            throw ArgumentError("support function requires phi > 1; node " + std::to_string(i) +
                                " has phi = " + std::to_string(phi_[i]));
        }
        u[i] = std::log(phi_[i]);
    }
    u_ = ScalarField(phi_.grid(), std::move(u));
}

SupportFunction SupportFunction::from_u(const ScalarField& u) {
    std::vector<double> phi(u.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::exp(u[i]);
    return SupportFunction(ScalarField(u.grid(), std::move(phi)));
}

double ShiftedCurvatures::min_kappa_tilde() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& kt : kappa_tilde) m = std::min(m, kt.min());
    return m;
}

AField build_A(const SupportFunction& sf) {
    const ScalarField& phi = sf.phi();
    const int n = phi.grid()->dim();
    const sphere::FrameDerivatives d = sphere::derivatives(phi);
    AField a(phi.size(), symfunc::SymMatrix(n));
    for (std::size_t p = 0; p < phi.size(); ++p) {
        const double v = phi[p];
        const double grad2 = d.grad[p][0] * d.grad[p][0] + d.grad[p][1] * d.grad[p][1];
        const double shift = -0.5 * grad2 / v + 0.5 * (v - 1.0 / v);
        a[p] = d.hess[p];
        for (int i = 0; i < n; ++i) a[p](i, i) += shift;
    }
    return a;
}

double min_eigenvalue(const AField& a) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& m_p : a) m = std::min(m, symfunc::eigenvalues(m_p).min());
    return m;
}

double max_eigenvalue(const AField& a) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& m_p : a) m = std::max(m, symfunc::eigenvalues(m_p).max());
    return m;
}

SymTensorField shifted_weingarten(const SupportFunction& sf, const AField& a) {
    SymTensorField w(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (!symfunc::positive_definite(a[p])) {
            throw ConeViolation("A[phi] is not positive definite at node " + std::to_string(p),
                                symfunc::eigenvalues(a[p]).min(), static_cast<std::ptrdiff_t>(p));
        }
        const symfunc::SymMatrix m = sf.phi()[p] * a[p];
        symfunc::SymMatrix inv(m.dim());
        const double det = m.determinant();
        if (m.dim() == 1) {
            inv(0, 0) = 1.0 / m(0, 0);
        } else {
            inv(0, 0) = m(1, 1) / det;
            inv(1, 1) = m(0, 0) / det;
            inv(0, 1) = -m(0, 1) / det;
        }
        w[p] = inv;
    }
    return w;
}

ShiftedCurvatures curvatures_from_values(std::vector<Eigenvalues> kappa_tilde, int k) {
    ShiftedCurvatures out;
    out.k = k;
    out.h_tilde_k.resize(kappa_tilde.size());
    out.radii.resize(kappa_tilde.size());
    for (std::size_t p = 0; p < kappa_tilde.size(); ++p) {
        const Eigenvalues& kt = kappa_tilde[p];
        out.h_tilde_k[p] = symfunc::sigma(kt, k);
        Eigenvalues r = Eigenvalues::constant(kt.size(), 0.0);
        for (int i = 0; i < kt.size(); ++i) r[i] = 1.0 / kt[i];
        out.radii[p] = r;
    }
    out.kappa_tilde = std::move(kappa_tilde);
    return out;
}

ShiftedCurvatures shifted_curvatures(const SymTensorField& w, int k) {
    std::vector<Eigenvalues> kt(w.size());
    for (std::size_t p = 0; p < w.size(); ++p) {
        kt[p] = symfunc::eigenvalues(w[p]);
        if (!(kt[p].min() > 0.0)) {
            throw ConeViolation("shifted principal curvature is not positive at node " + std::to_string(p),
                                kt[p].min(), static_cast<std::ptrdiff_t>(p));
        }
    }
    if (!w.empty() && (k < 1 || k > w.front().dim())) throw ArgumentError("shifted_curvatures: k out of range");
    return curvatures_from_values(std::move(kt), k);
}

HyperboloidPatch embed(const SupportFunction& sf) {
    const ScalarField& phi = sf.phi();
    const sphere::SphereGrid& g = *phi.grid();
    const sphere::FrameDerivatives d = sphere::derivatives(phi);
    HyperboloidPatch patch;
    patch.grid = phi.grid();
    patch.points.resize(phi.size());
    patch.normals.resize(phi.size());
    for (std::size_t p = 0; p < phi.size(); ++p) {
        const double v = phi[p];
        const Vec3& x = g.node(p);
        const Vec3 grad = sphere::frame_to_ambient(g, p, d.grad[p][0], d.grad[p][1]);
        const double grad2 = d.grad[p][0] * d.grad[p][0] + d.grad[p][1] * d.grad[p][1];
        const double radial = 0.5 * (grad2 / v + 1.0 / v);
        // X = phi/2 (-x, 1) + radial (x, 1) - (D phi, 0)
        LorentzVec X;
        X.time = 0.5 * v + radial;
        LorentzVec nu;
        nu.time = X.time - 1.0 / v;
        for (std::size_t c = 0; c < 3; ++c) {
            X.space[c] = (radial - 0.5 * v) * x[c] - grad[c];
            nu.space[c] = X.space[c] - x[c] / v;
        }
        patch.points[p] = X;
        patch.normals[p] = nu;
    }
    return patch;
}

ScalarField support_from_patch(const HyperboloidPatch& patch, const GridPtr& directions) {
    if (patch.points.empty()) throw ArgumentError("support_from_patch: empty patch");
    std::vector<double> u(directions->size());
    for (std::size_t q = 0; q < u.size(); ++q) {
        const LorentzVec ell = null_direction(directions->node(q));
        double best = -std::numeric_limits<double>::infinity();
        for (const LorentzVec& X : patch.points) {
            const double pairing = -minkowski(X, ell);
            if (!(pairing > 0.0)) throw GeometryError("patch point is not inside the horoball family");
            best = std::max(best, pairing);
        }
        u[q] = std::log(best);
    }
    return ScalarField(directions, std::move(u));
}

double hyperboloid_defect(const HyperboloidPatch& patch) {
    double d = 0.0;
    for (const LorentzVec& X : patch.points) d = std::max(d, std::abs(minkowski(X, X) + 1.0));
    return d;
}

double support_identity_defect(const SupportFunction& sf, const HyperboloidPatch& patch) {
    if (patch.points.size() != sf.phi().size()) throw ArgumentError("support_identity_defect: size mismatch");
    double d = 0.0;
    for (std::size_t p = 0; p < patch.points.size(); ++p) {
        const double pairing = -minkowski(patch.points[p], null_direction(patch.grid->node(p)));
        d = std::max(d, std::abs(pairing - sf.phi()[p]));
    }
    return d;
}

std::vector<Vec3> to_poincare(const HyperboloidPatch& patch) {
    std::vector<Vec3> out(patch.points.size());
    for (std::size_t p = 0; p < out.size(); ++p) {
        const LorentzVec& X = patch.points[p];
        const double s = 1.0 / (1.0 + X.time);
        out[p] = {X.space[0] * s, X.space[1] * s, X.space[2] * s};
    }
    return out;
}

}  // namespace hconvex::horo
