#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minerr {

namespace {

void require_finite(const std::vector<double>& entries, const char* what) {
    for (double e : entries) {
        if (!std::isfinite(e)) {
            throw std::invalid_argument(std::string(what) + " entry is not finite");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dims must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dims must be positive");
    if (data_.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
    require_finite(data_, "matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw std::invalid_argument("matrix dims must be positive");
    cols_ = rows.begin()->size();
    if (cols_ == 0) throw std::invalid_argument("matrix dims must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < other.cols_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < cols_; ++k) s += (*this)(i, k) * other(k, j);
            out(i, j) = s;
        }
    }
    return out;
}

Matrix Matrix::scaled(double s) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * s;
    return out;
}

Vector::Vector(std::size_t dim) : data_(dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("vector dim must be positive");
}

Vector::Vector(std::vector<double> entries) : data_(std::move(entries)) {
    if (data_.empty()) throw std::invalid_argument("vector dim must be positive");
    require_finite(data_, "vector");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector Vector::operator+(const Vector& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("vector dim mismatch");
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = data_[i] + other.data_[i];
    return out;
}

Vector Vector::operator-(const Vector& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("vector dim mismatch");
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = data_[i] - other.data_[i];
    return out;
}

Vector Vector::scaled(double s) const {
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = data_[i] * s;
    return out;
}

double Vector::inf_norm() const {
    double m = 0.0;
    for (double e : data_) m = std::max(m, std::abs(e));
    return m;
}

double Vector::euclidean_norm() const {
    double s = 0.0;
    for (double e : data_) s += e * e;
    return std::sqrt(s);
}

double row_dot(const Matrix& m, std::size_t row, const Vector& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(row, j) * v[j];
    return s;
}

Vector matvec(const Matrix& m, const Vector& v) {
    if (m.cols() != v.dim()) throw std::invalid_argument("matvec shape mismatch");
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = row_dot(m, i, v);
    return out;
}

bool is_metzler(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("is_metzler requires a square matrix");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j && m(i, j) < 0.0) return false;
        }
    }
    return true;
}

SplitMatrix positive_split(const Matrix& m) {
    Matrix plus(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            plus(i, j) = std::max(m(i, j), 0.0);
        }
    }
    return {plus, plus - m};
}

bool elementwise_leq(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("vector dim mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] > b[i]) return false;
    }
    return true;
}

bool elementwise_lt_strict(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("vector dim mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] >= b[i]) return false;
    }
    return true;
}

std::optional<Vector> lu_solve(const Matrix& a, const Vector& b) {
    if (!a.square() || a.rows() != b.dim()) throw std::invalid_argument("lu_solve shape mismatch");
    const std::size_t n = a.rows();

    double max_row_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rn = 0.0;
        for (std::size_t j = 0; j < n; ++j) rn += std::abs(a(i, j));
        max_row_norm = std::max(max_row_norm, rn);
    }
    const double pivot_floor = 1e-12 * max_row_norm;

    Matrix lu = a;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (std::abs(lu(i, col)) > std::abs(lu(piv, col))) piv = i;
        }
        if (std::abs(lu(piv, col)) <= pivot_floor) return std::nullopt;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
            std::swap(perm[piv], perm[col]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = lu(i, col) / lu(col, col);
            lu(i, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
        }
    }

    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x[j];
        x[ii] = s / lu(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) return std::nullopt;
    }
    return x;
}

std::optional<Matrix> invert(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("invert requires a square matrix");
    const std::size_t n = a.rows();
    Matrix out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n);
        e[j] = 1.0;
        auto col = lu_solve(a, e);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (*col)[i];
    }
    return out;
}

std::optional<Certificate> hurwitz_metzler_certificate(const Matrix& m, int gain_index) {
    if (!m.square()) throw std::invalid_argument("certificate requires a square matrix");
    const std::size_t n = m.rows();
    Vector neg_ones(n);
    for (std::size_t i = 0; i < n; ++i) neg_ones[i] = -1.0;
    auto v = lu_solve(m, neg_ones);
    if (!v) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) {
        if ((*v)[i] <= 0.0) return std::nullopt;
    }
    // epsilon from the computed residual, shaved by one part in 1e12 so
    // the row inequalities hold in floating point as well.
    const Vector mv = matvec(m, *v);
    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (mv[i] >= 0.0) return std::nullopt;
        eps = std::min(eps, -mv[i] / (*v)[i]);
    }
    eps *= (1.0 - 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mv[i] <= -eps * (*v)[i])) return std::nullopt;
    }
    return Certificate{gain_index, *v, eps};
}

}  // namespace minerr
