#include "olsattn/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace olsattn {

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw dimension_error("matrix shape must be positive, got " + shape_str(rows, cols));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    check_shape(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_shape(rows, cols);
    if (data_.size() != rows * cols) {
        throw dimension_error("entry count " + std::to_string(data_.size()) + " does not match shape " +
                              shape_str(rows, cols));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw dimension_error("non-finite entry in " + shape_str(rows, cols) + " matrix");
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    check_shape(r, c);
    std::vector<double> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw dimension_error("ragged row in matrix literal");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(entries));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw dimension_error("matmul: dimension mismatch, " + shape_str(a.rows(), a.cols()) + " times " +
                              shape_str(b.rows(), b.cols()));
    }
    Matrix out(a.rows(), b.cols());
    // ikj order: accumulate row i of the result while streaming row k of b.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

bool same_shape(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
}

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!same_shape(a, b)) {
        throw dimension_error(std::string(op) + ": shape mismatch, " + shape_str(a.rows(), a.cols()) + " vs " +
                              shape_str(b.rows(), b.cols()));
    }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "add");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "sub");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

Matrix operator*(double scalar, const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = scalar * a(i, j);
    return out;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

Matrix symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw dimension_error("symmetrize: matrix is " + shape_str(m.rows(), m.cols()) + ", not square");
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
    return out;
}

Matrix empirical_covariance(const Matrix& x) {
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    Matrix gram = matmul(transpose(x), x);
    return symmetrize(inv_n * gram);
}

}  // namespace olsattn
