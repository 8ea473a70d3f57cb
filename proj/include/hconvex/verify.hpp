#pragma once

// Independent curvature oracle. The hypersurface is rebuilt from the support
// function and its principal curvatures are re-measured from the embedded
// points alone (finite-difference tangents and second derivatives paired
// against the normal in Minkowski space). Nothing here touches A[phi].

#include <string>
#include <vector>

#include "hconvex/horo.hpp"
#include "hconvex/solver.hpp"

namespace hconvex::verify {

using horo::HyperboloidPatch;
using horo::LorentzVec;
using horo::ShiftedCurvatures;
using horo::SupportFunction;
using sphere::ScalarField;

struct Monitor {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct CurvatureReport {
    ScalarField h_tilde_k_measured;
    ScalarField h_tilde_k_prescribed;
    double linf_rel_error = 0.0;
    double l2_rel_error = 0.0;
    double min_kappa_tilde = 0.0;
    std::vector<Monitor> monitors;

    [[nodiscard]] bool all_monitors_pass() const;
};

/// Shifted principal curvatures of the patch, ascending per node. Values are
/// returned even when some kappa_tilde is not positive; the caller decides.
/// Throws GeometryError when the induced metric degenerates.
[[nodiscard]] ShiftedCurvatures measure_curvatures(const HyperboloidPatch& patch, int k);

/// Unit spacelike vectors Minkowski-orthogonal to X and its difference tangents.
[[nodiscard]] std::vector<LorentzVec> fd_normals(const HyperboloidPatch& patch);

/// Relative H_tilde_k errors against the prescription plus the monitor suite.
/// Throws ArgumentError when the inputs live on different grids.
[[nodiscard]] CurvatureReport compare(const ShiftedCurvatures& measured, const solver::ProblemSpec& spec,
                                      const SupportFunction& sf, const HyperboloidPatch& patch);

/// Largest per-node distance between the sorted eigenvalues of (phi A)^{-1}
/// and the re-measured shifted curvatures.
[[nodiscard]] double weingarten_crosscheck(const SupportFunction& sf);

}  // namespace hconvex::verify
