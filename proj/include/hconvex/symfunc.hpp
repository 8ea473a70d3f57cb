#pragma once

// Elementary symmetric functions of eigenvalue vectors and small symmetric
// matrices (n <= 3), with the derivative tensors and Garding-cone checks used
// by the Hessian quotient solver.

#include <array>
#include <cstddef>
#include <initializer_list>

namespace hconvex::symfunc {

inline constexpr int kMaxDim = 3;

/// Ordered list of n <= 3 real eigenvalues.
class Eigenvalues {
public:
    Eigenvalues() = default;
    Eigenvalues(std::initializer_list<double> values);
    /// n copies of the same value.
    static Eigenvalues constant(int n, double value);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;

private:
    std::array<double, kMaxDim> values_{};
    int n_ = 0;
};

/// Symmetric n x n matrix, n <= 3. Only the upper triangle is stored, so
/// (i, j) and (j, i) always refer to the same entry.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n);
    /// Row-major full entries; the lower triangle must mirror the upper one.
    SymMatrix(int n, std::initializer_list<double> rows);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const Eigenvalues& d);

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] double operator()(int i, int j) const { return data_[slot(i, j)]; }
    double& operator()(int i, int j) { return data_[slot(i, j)]; }

    [[nodiscard]] double trace() const;
    [[nodiscard]] double determinant() const;

    SymMatrix& operator+=(const SymMatrix& other);
    SymMatrix& operator*=(double s);
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

private:
    [[nodiscard]] std::size_t slot(int i, int j) const;

    // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    std::array<double, 6> data_{};
    int n_ = 0;
};

/// Closed-form eigenvalues in ascending order (quadratic formula for n = 2,
/// trigonometric cubic solution for n = 3).
[[nodiscard]] Eigenvalues eigenvalues(const SymMatrix& a);

[[nodiscard]] double binomial(int n, int k);

/// k-th elementary symmetric polynomial; sigma_0 = 1.
[[nodiscard]] double sigma(const Eigenvalues& lambda, int k);

/// sigma_k of lambda with entry `skip` removed (the derivative d sigma_{k+1} / d lambda_skip).
[[nodiscard]] double sigma_without(const Eigenvalues& lambda, int k, int skip);

/// sigma_k(A) from sums of principal minors; equals sigma(eigenvalues(A), k).
[[nodiscard]] double sigma_matrix(const SymMatrix& a, int k);

/// d sigma_k / d A_ij, treating A_ij and A_ji as independent entries.
[[nodiscard]] SymMatrix sigma_gradient(const SymMatrix& a, int k);

/// (sigma_n(A) / sigma_{n-k}(A))^{1/k}. Throws ConeViolation unless A > 0.
[[nodiscard]] double quotient_F(const SymMatrix& a, int n, int k);

/// sigma_i(lambda) > 0 for 1 <= i <= k.
[[nodiscard]] bool in_garding_cone(const Eigenvalues& lambda, int k);

/// Positive definiteness by leading principal minors.
[[nodiscard]] bool positive_definite(const SymMatrix& a);

/// RHS - LHS of the generalized Newton-MacLaurin inequality
///   [(s_k/C(n,k)) / (s_l/C(n,l))]^{1/(k-l)} <= [(s_r/C(n,r)) / (s_s/C(n,s))]^{1/(r-s)}.
/// Requires lambda in Gamma_k, k > l >= 0, r > s >= 0, k >= r, l >= s.
[[nodiscard]] double newton_maclaurin_gap(const Eigenvalues& lambda, int k, int l, int r, int s);

/// Gradient of (sigma_k / sigma_l)^{1/(k-l)} with respect to lambda (exact).
[[nodiscard]] Eigenvalues quotient_root_gradient(const Eigenvalues& lambda, int k, int l);

/// sum_i d/dlambda_i (sigma_k / sigma_l)^{1/(k-l)} - (C(n,k) / C(n,l))^{1/(k-l)}; never negative on Gamma_k.
[[nodiscard]] double sum_bound_gap(const Eigenvalues& lambda, int k, int l);

}  // namespace hconvex::symfunc
