#include "edgesync/numerics.hpp"

#include <algorithm>
#include <numeric>

namespace edgesync {

DivergenceError::DivergenceError(double time, std::size_t index)
    : std::runtime_error("numerical divergence at t=" + std::to_string(time) + " (state index " +
                         std::to_string(index) + ")"),
      time_(time),
      index_(index) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("Matrix::block out of range");
    Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

double Matrix::frobenius_norm() const { return norm(data_); }

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum: shapes differ");
    Matrix out = a;
    auto od = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] += bd[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector product: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("hcat: row counts differ");
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Vector axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
    Vector out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
    return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) { return axpy(-1.0, b, a); }

Vector hadamard(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("hadamard: length mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

}  // namespace

SymEig sym_eig(const Matrix& s) {
    if (!s.square()) throw DimensionError("sym_eig: matrix is not square");
    if (!s.all_finite()) throw std::invalid_argument("sym_eig: non-finite entry");
    const std::size_t n = s.rows();

    double scale = 0.0;
    for (double v : s.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale)
                throw SymmetryError("sym_eig: matrix is not symmetric");

    Matrix a = s;
    // Exact symmetrisation so rotations see one consistent off-diagonal value.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (s(i, j) + s(j, i));
    Matrix v = Matrix::identity(n);

    const double tol = 1e-14 * s.frobenius_norm();
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEig out{Vector(n), Matrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
    }
    return out;
}

namespace {

constexpr double kSingularCutoff = 1e-12;

// Right singular pairs of a tall (rows >= cols) matrix via the eigenvectors
// of A^T A. Singular values are recomputed as ||A v|| so that exact null
// directions come out at roundoff level instead of sqrt(roundoff).
struct RightSingular {
    Matrix v;
    Vector sigma;
    Matrix av;  // columns A v_i
};

RightSingular right_singular(const Matrix& a) {
    const Matrix at = a.transpose();
    const SymEig eig = sym_eig(at * a);
    RightSingular out{eig.vectors, Vector(a.cols()), a * eig.vectors};
    for (std::size_t i = 0; i < a.cols(); ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) acc += out.av(r, i) * out.av(r, i);
        out.sigma[i] = std::sqrt(acc);
    }
    return out;
}

Matrix pinv_tall(const Matrix& a) {
    const RightSingular rs = right_singular(a);
    const double smax = rs.sigma.empty() ? 0.0 : *std::max_element(rs.sigma.begin(), rs.sigma.end());
    Matrix out(a.cols(), a.rows());
    if (smax == 0.0) return out;
    for (std::size_t i = 0; i < a.cols(); ++i) {
        const double s = rs.sigma[i];
        if (s <= kSingularCutoff * smax) continue;
        const double inv = 1.0 / (s * s);
        // A^+ += v_i (A v_i)^T / sigma_i^2
        for (std::size_t r = 0; r < a.cols(); ++r) {
            const double vr = rs.v(r, i) * inv;
            for (std::size_t c = 0; c < a.rows(); ++c) out(r, c) += vr * rs.av(c, i);
        }
    }
    return out;
}

}  // namespace

Matrix pinv(const Matrix& a) {
    if (!a.all_finite()) throw std::invalid_argument("pinv: non-finite entry");
    if (a.rows() >= a.cols()) return pinv_tall(a);
    return pinv_tall(a.transpose()).transpose();
}

std::size_t rank(const Matrix& a) {
    const RightSingular rs = right_singular(a.rows() >= a.cols() ? a : a.transpose());
    const double smax = rs.sigma.empty() ? 0.0 : *std::max_element(rs.sigma.begin(), rs.sigma.end());
    if (smax == 0.0) return 0;
    return static_cast<std::size_t>(
        std::count_if(rs.sigma.begin(), rs.sigma.end(), [&](double s) { return s > kSingularCutoff * smax; }));
}

}  // namespace edgesync
