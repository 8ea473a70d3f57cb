#include "hconvex/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hconvex/errors.hpp"

namespace hconvex::symfunc {

namespace {

void check_dim(int n) {
    if (n < 1 || n > kMaxDim) {
        throw ArgumentError("dimension must be in [1, 3], got " + std::to_string(n));
    }
}

void check_order(int k, int lo, int hi, const char* what) {
    if (k < lo || k > hi) {
        throw ArgumentError(std::string(what) + ": order " + std::to_string(k) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

void require_cone(const Eigenvalues& lambda, int k) {
    if (!in_garding_cone(lambda, k)) {
        throw ConeViolation("eigenvalues outside Gamma_" + std::to_string(k), lambda.min());
    }
}

}  // namespace

Eigenvalues::Eigenvalues(std::initializer_list<double> values) {
    check_dim(static_cast<int>(values.size()));
    n_ = static_cast<int>(values.size());
    std::copy(values.begin(), values.end(), values_.begin());
}

Eigenvalues Eigenvalues::constant(int n, double value) {
    check_dim(n);
    Eigenvalues e;
    e.n_ = n;
    std::fill_n(e.values_.begin(), n, value);
    return e;
}

double Eigenvalues::min() const {
    return *std::min_element(values_.begin(), values_.begin() + n_);
}

double Eigenvalues::max() const {
    return *std::max_element(values_.begin(), values_.begin() + n_);
}

SymMatrix::SymMatrix(int n) : n_(n) { check_dim(n); }

SymMatrix::SymMatrix(int n, std::initializer_list<double> rows) : SymMatrix(n) {
    if (rows.size() != static_cast<std::size_t>(n * n)) {
        throw ArgumentError("SymMatrix: expected n*n entries");
    }
    const auto* p = rows.begin();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = p[i * n + j];
            if (j >= i) {
                (*this)(i, j) = v;
            } else if (v != (*this)(j, i)) {
                throw ArgumentError("SymMatrix: entries are not symmetric");
            }
        }
    }
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(const Eigenvalues& d) {
    SymMatrix m(d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::size_t SymMatrix::slot(int i, int j) const {
    if (i > j) std::swap(i, j);
    // Row offsets of the packed upper triangle for n <= 3.
    static constexpr std::array<int, 3> offset{0, 2, 3};
    return static_cast<std::size_t>(offset[static_cast<std::size_t>(i)] + j);
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::determinant() const {
    const auto& a = *this;
    switch (n_) {
        case 1:
            return a(0, 0);
        case 2:
            return a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
        default:
            return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) -
                   a(0, 1) * (a(0, 1) * a(2, 2) - a(1, 2) * a(0, 2)) +
                   a(0, 2) * (a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2));
    }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
    if (other.n_ != n_) throw ArgumentError("SymMatrix: dimension mismatch");
    for (std::size_t s = 0; s < data_.size(); ++s) data_[s] += other.data_[s];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Eigenvalues eigenvalues(const SymMatrix& a) {
    const int n = a.dim();
    check_dim(n);
    if (n == 1) return {a(0, 0)};
    if (n == 2) {
        const double mean = 0.5 * (a(0, 0) + a(1, 1));
        const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
        const double r = std::hypot(half_diff, a(0, 1));
        return {mean - r, mean + r};
    }
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off == 0.0) {
        std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
        std::sort(d.begin(), d.end());
        return {d[0], d[1], d[2]};
    }
    const double q = a.trace() / 3.0;
    const double d0 = a(0, 0) - q;
    const double d1 = a(1, 1) - q;
    const double d2 = a(2, 2) - q;
    const double p = std::sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off) / 6.0);
    SymMatrix b = a;
    for (int i = 0; i < 3; ++i) b(i, i) -= q;
    b *= 1.0 / p;
    const double r = std::clamp(0.5 * b.determinant(), -1.0, 1.0);
    const double angle = std::acos(r) / 3.0;
    const double largest = q + 2.0 * p * std::cos(angle);
    const double smallest = q + 2.0 * p * std::cos(angle + 2.0 * std::numbers::pi / 3.0);
    // The middle root is deflated from the trace.
    const double middle = 3.0 * q - largest - smallest;
    return {smallest, middle, largest};
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

double sigma(const Eigenvalues& lambda, int k) {
    const int n = lambda.size();
    check_order(k, 0, n, "sigma");
    // e[j] accumulates sigma_j of the first i entries.
    std::array<double, kMaxDim + 1> e{1.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j >= 1; --j) e[static_cast<std::size_t>(j)] += lambda[i] * e[static_cast<std::size_t>(j - 1)];
    }
    return e[static_cast<std::size_t>(k)];
}

double sigma_without(const Eigenvalues& lambda, int k, int skip) {
    const int n = lambda.size();
    if (k < 0 || k > n - 1) return k == 0 ? 1.0 : 0.0;
    std::array<double, kMaxDim + 1> e{1.0, 0.0, 0.0, 0.0};
    int used = 0;
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        for (int j = used + 1; j >= 1; --j) e[static_cast<std::size_t>(j)] += lambda[i] * e[static_cast<std::size_t>(j - 1)];
        ++used;
    }
    return e[static_cast<std::size_t>(k)];
}

double sigma_matrix(const SymMatrix& a, int k) {
    const int n = a.dim();
    check_order(k, 0, n, "sigma_matrix");
    if (k == 0) return 1.0;
    if (k == 1) return a.trace();
    if (k == n) return a.determinant();
    // n = 3, k = 2: sum of principal 2x2 minors.
    return a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1) + a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2) +
           a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
}

SymMatrix sigma_gradient(const SymMatrix& a, int k) {
    const int n = a.dim();
    check_order(k, 1, n, "sigma_gradient");
    if (k == 1) return SymMatrix::identity(n);
    if (k == 2) {
        SymMatrix g = a.trace() * SymMatrix::identity(n);
        g += -1.0 * a;
        return g;
    }
    // k = 3 = n: cofactor matrix of A.
    SymMatrix c(3);
    c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
    c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2);
    c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
    c(0, 1) = a(0, 2) * a(1, 2) - a(0, 1) * a(2, 2);
    c(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    c(1, 2) = a(0, 1) * a(0, 2) - a(0, 0) * a(1, 2);
    return c;
}

bool positive_definite(const SymMatrix& a) {
    switch (a.dim()) {
        case 1:
            return a(0, 0) > 0.0;
        case 2:
            return a(0, 0) > 0.0 && a.determinant() > 0.0;
        default:
            return a(0, 0) > 0.0 && a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1) > 0.0 && a.determinant() > 0.0;
    }
}

double quotient_F(const SymMatrix& a, int n, int k) {
    if (a.dim() != n) throw ArgumentError("quotient_F: matrix dimension differs from n");
    check_order(k, 1, n, "quotient_F");
    if (!positive_definite(a)) {
        throw ConeViolation("quotient_F: matrix is not positive definite", eigenvalues(a).min());
    }
    return std::pow(sigma_matrix(a, n) / sigma_matrix(a, n - k), 1.0 / k);
}

bool in_garding_cone(const Eigenvalues& lambda, int k) {
    check_order(k, 1, lambda.size(), "in_garding_cone");
    for (int i = 1; i <= k; ++i) {
        if (!(sigma(lambda, i) > 0.0)) return false;
    }
    return true;
}

double newton_maclaurin_gap(const Eigenvalues& lambda, int k, int l, int r, int s) {
    const int n = lambda.size();
    if (!(k > l && l >= 0 && r > s && s >= 0 && k >= r && l >= s && k <= n)) {
        throw ArgumentError("newton_maclaurin_gap: indices violate k > l >= 0, r > s >= 0, k >= r, l >= s");
    }
    require_cone(lambda, k);
    auto normalized = [&](int i) { return sigma(lambda, i) / binomial(n, i); };
    const double lhs = std::pow(normalized(k) / normalized(l), 1.0 / (k - l));
    const double rhs = std::pow(normalized(r) / normalized(s), 1.0 / (r - s));
    return rhs - lhs;
}

Eigenvalues quotient_root_gradient(const Eigenvalues& lambda, int k, int l) {
    const int n = lambda.size();
    if (!(n >= k && k > l && l >= 0)) throw ArgumentError("quotient_root_gradient: need n >= k > l >= 0");
    require_cone(lambda, k);
    const double sk = sigma(lambda, k);
    const double sl = sigma(lambda, l);
    const double root = std::pow(sk / sl, 1.0 / (k - l));
    Eigenvalues grad = Eigenvalues::constant(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double dk = sigma_without(lambda, k - 1, i) / sk;
        const double dl = l == 0 ? 0.0 : sigma_without(lambda, l - 1, i) / sl;
        grad[i] = root / (k - l) * (dk - dl);
    }
    return grad;
}

double sum_bound_gap(const Eigenvalues& lambda, int k, int l) {
    const int n = lambda.size();
    const Eigenvalues grad = quotient_root_gradient(lambda, k, l);
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += grad[i];
    return total - std::pow(binomial(n, k) / binomial(n, l), 1.0 / (k - l));
}

}  // namespace hconvex::symfunc
