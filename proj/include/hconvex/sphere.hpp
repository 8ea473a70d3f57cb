#pragma once

// Pole-free latitude/longitude discretization of S^1 and S^2 with exact
// antipodal symmetry, midpoint quadrature and covariant derivatives in the
// orthonormal frame (e_theta, e_phi).
//
// Difference quotients are trigonometrically fitted: the central stencils
// are scaled by sin(h) / sin^2(h/2) instead of h / h^2. They remain
// second-order accurate and reproduce constants and the restrictions of
// linear functions (degree-1 harmonics) exactly, so the discrete operator
// Delta + n keeps the coordinate functions in its kernel.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <vector>

#include "hconvex/symfunc.hpp"

namespace hconvex::sphere {

using Vec3 = std::array<double, 3>;
using SparseOp = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Linear finite-difference operators on node values. For n = 1 only
/// `d1` (d/dtheta) and `d11` (d^2/dtheta^2) are populated.
struct DifferenceOps {
    SparseOp d1;   // frame gradient component along e_theta
    SparseOp d2;   // frame gradient component along e_phi
    SparseOp d11;  // covariant Hessian, (e_theta, e_theta)
    SparseOp d12;  // covariant Hessian, (e_theta, e_phi)
    SparseOp d22;  // covariant Hessian, (e_phi, e_phi)
};

/// 1-D fitted central-difference weights for step h.
struct FittedWeights {
    double first;   // multiplies (f[+1] - f[-1])
    double second;  // multiplies (f[+1] - 2 f[0] + f[-1])
    static FittedWeights for_step(double h);
};

class SphereGrid {
public:
    /// n = 1: n_phi uniform nodes on the circle (n_theta ignored).
    /// n = 2: colatitudes (i + 1/2) pi / n_theta, longitudes 2 pi j / n_phi.
    static std::shared_ptr<const SphereGrid> build(int n, int n_theta, int n_phi);

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] int n_theta() const noexcept { return n_theta_; }
    [[nodiscard]] int n_phi() const noexcept { return n_phi_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    /// Unit vector in R^{n+1}; the unused third slot is 0 for n = 1.
    [[nodiscard]] const Vec3& node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] std::size_t antipode(std::size_t i) const { return antipode_[i]; }
    /// Colatitude (n = 2) or angle on the circle (n = 1).
    [[nodiscard]] double theta(std::size_t i) const { return theta_[i]; }
    /// Longitude (n = 2); 0 for n = 1.
    [[nodiscard]] double longitude(std::size_t i) const { return longitude_[i]; }
    [[nodiscard]] const std::array<Vec3, 2>& frame(std::size_t i) const { return frame_[i]; }

    [[nodiscard]] double area() const noexcept { return area_; }
    /// Largest coordinate step; the h in O(h^2) slack terms.
    [[nodiscard]] double spacing() const noexcept;
    [[nodiscard]] double step_theta() const noexcept { return step_theta_; }
    [[nodiscard]] double step_phi() const noexcept { return step_phi_; }

    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_phi_) + static_cast<std::size_t>(j);
    }
    /// Index of coordinate node (i, j) where i may be -1 or n_theta (one ring
    /// past a pole) and j is taken modulo n_phi. Rows past a pole map to the
    /// physical node at longitude shifted by pi. For n = 1, i is ignored.
    [[nodiscard]] std::size_t wrap(int i, int j) const;

    [[nodiscard]] const DifferenceOps& ops() const noexcept { return ops_; }

private:
    SphereGrid() = default;
    void build_ops();

    int n_ = 0;
    int n_theta_ = 1;
    int n_phi_ = 0;
    double step_theta_ = 0.0;
    double step_phi_ = 0.0;
    double area_ = 0.0;
    std::vector<Vec3> nodes_;
    std::vector<std::array<Vec3, 2>> frame_;
    std::vector<double> weights_;
    std::vector<double> theta_;
    std::vector<double> longitude_;
    std::vector<std::size_t> antipode_;
    DifferenceOps ops_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Real values sampled at grid nodes.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(GridPtr grid, std::vector<double> values);
    ScalarField(GridPtr grid, double value);

    template <class Fn>
    static ScalarField from_function(const GridPtr& grid, Fn&& fn) {
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
        return ScalarField(grid, std::move(v));
    }

    [[nodiscard]] const GridPtr& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] Eigen::Map<const Eigen::VectorXd> vec() const;

    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] double max_abs() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Per-node symmetric n x n matrices in the orthonormal frame.
using SymTensorField = std::vector<symfunc::SymMatrix>;

struct FrameDerivatives {
    std::vector<std::array<double, 2>> grad;  // frame components; second slot unused for n = 1
    SymTensorField hess;
};

[[nodiscard]] FrameDerivatives derivatives(const ScalarField& field);
[[nodiscard]] ScalarField laplacian(const ScalarField& field);
/// (f(x) + f(-x)) / 2.
[[nodiscard]] ScalarField even_project(const ScalarField& field);
/// Midpoint quadrature sum of values times weights.
[[nodiscard]] double integrate(const ScalarField& field);
/// max_i |f(i) - f(antipode(i))|.
[[nodiscard]] double evenness_defect(const ScalarField& field);

/// Ambient R^{n+1} vector of a tangent vector with frame components (a, b).
[[nodiscard]] Vec3 frame_to_ambient(const SphereGrid& grid, std::size_t node, double a, double b);

}  // namespace hconvex::sphere
