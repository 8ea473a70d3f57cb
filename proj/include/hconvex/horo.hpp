#pragma once

// Horospherical geometry: the operator A[phi], the shifted Weingarten
// matrix, the embedding of a support function into the hyperboloid model
// and the export to the Poincare ball.
//
// Minkowski vectors are stored as (spatial part in R^{n+1}, time part X^0)
// with pairing <X, Y> = X_s . Y_s - X^0 Y^0.

#include <vector>

#include "hconvex/sphere.hpp"
#include "hconvex/symfunc.hpp"

namespace hconvex::horo {

using sphere::GridPtr;
using sphere::ScalarField;
using sphere::SymTensorField;
using sphere::Vec3;
using symfunc::Eigenvalues;

struct LorentzVec {
    Vec3 space{};
    double time = 0.0;
};

[[nodiscard]] double minkowski(const LorentzVec& a, const LorentzVec& b);
/// The null vector (x, 1) attached to the ideal point x.
[[nodiscard]] LorentzVec null_direction(const Vec3& x);

/// phi = e^u with phi > 1 at every node.
class SupportFunction {
public:
    explicit SupportFunction(ScalarField phi);
    static SupportFunction from_u(const ScalarField& u);

    [[nodiscard]] const ScalarField& phi() const noexcept { return phi_; }
    [[nodiscard]] const ScalarField& u() const noexcept { return u_; }
    [[nodiscard]] const GridPtr& grid() const noexcept { return phi_.grid(); }

private:
    ScalarField phi_;
    ScalarField u_;
};

/// Per-node A[phi] = D^2 phi - |D phi|^2 / (2 phi) I + (phi - 1/phi) / 2 I.
using AField = SymTensorField;

struct HyperboloidPatch {
    GridPtr grid;
    std::vector<LorentzVec> points;
    std::vector<LorentzVec> normals;
};

struct ShiftedCurvatures {
    int k = 1;
    std::vector<Eigenvalues> kappa_tilde;  // ascending per node
    std::vector<double> h_tilde_k;
    std::vector<Eigenvalues> radii;  // 1 / kappa_tilde, same order

    [[nodiscard]] double min_kappa_tilde() const;
};

[[nodiscard]] AField build_A(const SupportFunction& sf);
/// Smallest eigenvalue of A over all nodes.
[[nodiscard]] double min_eigenvalue(const AField& a);
[[nodiscard]] double max_eigenvalue(const AField& a);

/// Per-node (phi A)^{-1}. Throws ConeViolation naming the first node where A is not positive definite.
[[nodiscard]] SymTensorField shifted_weingarten(const SupportFunction& sf, const AField& a);

/// Eigenvalues, sigma_k and curvature radii of a positive definite tensor field.
[[nodiscard]] ShiftedCurvatures shifted_curvatures(const SymTensorField& w, int k);

/// Builds shifted curvatures from per-node kappa_tilde without positivity checks.
[[nodiscard]] ShiftedCurvatures curvatures_from_values(std::vector<Eigenvalues> kappa_tilde, int k);

[[nodiscard]] HyperboloidPatch embed(const SupportFunction& sf);

/// Discrete support function: max over patch nodes of log(-<X, (x, 1)>).
[[nodiscard]] ScalarField support_from_patch(const HyperboloidPatch& patch, const GridPtr& directions);

/// max over nodes of |<X, X> + 1|.
[[nodiscard]] double hyperboloid_defect(const HyperboloidPatch& patch);
/// max over nodes of |-<X(x), (x, 1)> - phi(x)|.
[[nodiscard]] double support_identity_defect(const SupportFunction& sf, const HyperboloidPatch& patch);

/// X_spatial / (1 + X^0) for every patch point.
[[nodiscard]] std::vector<Vec3> to_poincare(const HyperboloidPatch& patch);

}  // namespace hconvex::horo
