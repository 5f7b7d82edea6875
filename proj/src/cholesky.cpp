#include "olsattn/cholesky.hpp"

#include <cmath>
#include <string>

namespace olsattn {

Matrix cholesky_lower(const Matrix& a, double pivot_rel_tol) {
    if (a.rows() != a.cols()) {
        throw dimension_error("cholesky: matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              ", not square");
    }
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));

    Matrix r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= r(j, k) * r(j, k);
        if (pivot_rel_tol > 0.0 && d <= pivot_rel_tol * max_diag) {
            throw rank_deficient_error("cholesky: pivot " + std::to_string(d) + " at column " + std::to_string(j) +
                                       " under rank gate " + std::to_string(pivot_rel_tol * max_diag));
        }
        if (d <= 0.0) {
            throw numerical_error("cholesky: non-positive pivot " + std::to_string(d) + " at column " +
                                  std::to_string(j) + ", matrix not positive definite");
        }
        r(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= r(i, k) * r(j, k);
            r(i, j) = s / r(j, j);
        }
    }
    return r;
}

Matrix solve_spd(const Matrix& a, const Matrix& b, double pivot_rel_tol) {
    if (a.rows() != b.rows()) {
        throw dimension_error("solve_spd: lhs is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " but rhs has " + std::to_string(b.rows()) + " rows");
    }
    const Matrix r = cholesky_lower(a, pivot_rel_tol);
    const std::size_t n = a.rows();

    Matrix x(b.rows(), b.cols());
    for (std::size_t col = 0; col < b.cols(); ++col) {
        // R y = b, forward.
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, col);
            for (std::size_t k = 0; k < i; ++k) s -= r(i, k) * y[k];
            y[i] = s / r(i, i);
        }
        // Rt x = y, backward.
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= r(k, ii) * x(k, col);
            x(ii, col) = s / r(ii, ii);
        }
    }
    return x;
}

}  // namespace olsattn
