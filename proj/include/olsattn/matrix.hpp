#ifndef OLSATTN_MATRIX_HPP
#define OLSATTN_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "olsattn/errors.hpp"

namespace olsattn {

/// Dense real matrix, row-major flat storage.
///
/// Constructors reject empty shapes and non-finite entries; every operation
/// below produces a fresh value. Sized for the small dense regime (k up to a
/// few dozen columns, a few thousand rows).
class Matrix {
public:
    /// Zero-filled rows x cols matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major entries; throws dimension_error if the
    /// entry count does not match rows*cols or any entry is NaN/Inf.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);

    /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double scalar, const Matrix& a);

bool same_shape(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

/// (M + Mt)/2; requires a square input.
Matrix symmetrize(const Matrix& m);

/// Empirical second-moment matrix (1/n) Xt X of an n x k design,
/// symmetrized after computation.
Matrix empirical_covariance(const Matrix& x);

}  // namespace olsattn

#endif
