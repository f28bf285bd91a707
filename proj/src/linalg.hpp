#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minerr {

// Dense row-major matrix. Entries are validated to be finite at
// construction; sizes are small (observer design scale), so no attempt
// is made at blocking or sparsity.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix operator*(const Matrix& other) const;
    Matrix scaled(double s) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim);
    explicit Vector(std::vector<double> entries);
    Vector(std::initializer_list<double> entries);

    std::size_t dim() const { return data_.size(); }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    const std::vector<double>& data() const { return data_; }

    Vector operator+(const Vector& other) const;
    Vector operator-(const Vector& other) const;
    Vector scaled(double s) const;

    double inf_norm() const;
    double euclidean_norm() const;

    bool operator==(const Vector& other) const = default;

private:
    std::vector<double> data_;
};

// Row-dot accumulation in ascending column order; every matrix-vector
// product in the project goes through this so that alternative
// formulations of the same dynamics stay bitwise comparable.
Vector matvec(const Matrix& m, const Vector& v);
double row_dot(const Matrix& m, std::size_t row, const Vector& v);

bool is_metzler(const Matrix& m);

// M = Mplus - Mminus with both parts entrywise nonnegative.
struct SplitMatrix {
    Matrix plus;
    Matrix minus;
};
SplitMatrix positive_split(const Matrix& m);

bool elementwise_leq(const Vector& a, const Vector& b);
bool elementwise_lt_strict(const Vector& a, const Vector& b);

// Solves A x = b by LU with partial pivoting. Returns nullopt when a
// pivot falls below 1e-12 times the largest row norm (treated as
// singular).
std::optional<Vector> lu_solve(const Matrix& a, const Vector& b);

std::optional<Matrix> invert(const Matrix& a);

// Witness (v >> 0, epsilon > 0) that a Metzler matrix M is Hurwitz:
// [M v]_i <= -epsilon v_i for every row. Canonical choice v = -M^{-1} 1,
// which is a valid witness exactly when one exists.
struct Certificate {
    int gain_index = 0;  // 1-based index into the owning gain family
    Vector v;
    double epsilon = 0.0;
};

std::optional<Certificate> hurwitz_metzler_certificate(const Matrix& m, int gain_index = 0);

}  // namespace minerr
