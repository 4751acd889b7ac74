#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edgesync {

using Vector = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SymmetryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an integration stage produces a non-finite or runaway value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(double time, std::size_t index);

    double time() const noexcept { return time_; }
    std::size_t index() const noexcept { return index_; }

private:
    double time_;
    std::size_t index_;
};

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    Matrix transpose() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    double frobenius_norm() const;
    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);
inline Vector operator*(const Matrix& a, const Vector& x) { return a * std::span<const double>(x); }

/// Horizontal concatenation [a b].
Matrix hcat(const Matrix& a, const Matrix& b);

double norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y);  // alpha*x + y
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector hadamard(std::span<const double> a, std::span<const double> b);
double max_abs_diff(const Matrix& a, const Matrix& b);

struct SymEig {
    Vector values;  // ascending
    Matrix vectors; // column i pairs with values[i]
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius norm falls below 1e-14 * ||S||_F.
/// Throws DimensionError for non-square input and SymmetryError if
/// max |S - S^T| exceeds 1e-12 * max |S|.
SymEig sym_eig(const Matrix& s);

/// Moore-Penrose pseudoinverse. Singular values below 1e-12 * sigma_max are
/// treated as zero.
Matrix pinv(const Matrix& a);

/// Numerical rank with the same truncation rule as pinv.
std::size_t rank(const Matrix& a);

namespace detail {
inline void check_finite(std::span<const double> v, double t) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw DivergenceError(t, i);
    }
}
}  // namespace detail

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
///
/// Every stage derivative is checked; a non-finite entry raises
/// DivergenceError with the stage time and the offending index.
template <typename Field>
Vector rk4_step(Field&& f, double t, std::span<const double> y, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const std::size_t n = y.size();
    const double half = 0.5 * dt;

    Vector stage(n);
    Vector k1 = f(t, std::span<const double>(y.data(), n));
    if (k1.size() != n) throw DimensionError("rk4_step: vector field changed dimension");
    detail::check_finite(k1, t);

    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + half * k1[i];
    Vector k2 = f(t + half, std::span<const double>(stage));
    detail::check_finite(k2, t + half);

    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + half * k2[i];
    Vector k3 = f(t + half, std::span<const double>(stage));
    detail::check_finite(k3, t + half);

    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
    Vector k4 = f(t + dt, std::span<const double>(stage));
    detail::check_finite(k4, t + dt);

    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    detail::check_finite(out, t + dt);
    return out;
}

}  // namespace edgesync
