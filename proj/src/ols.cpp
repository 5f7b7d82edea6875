#include "olsattn/ols.hpp"

#include <string>

#include "olsattn/cholesky.hpp"
#include "olsattn/spectral.hpp"

namespace olsattn {

void check_regression_shapes(const Matrix& x, const Matrix& y, const char* op) {
    if (y.cols() != 1) {
        throw dimension_error(std::string(op) + ": response must be a column vector, got " +
                              std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    }
    if (x.rows() != y.rows()) {
        throw dimension_error(std::string(op) + ": design has " + std::to_string(x.rows()) +
                              " rows but response has " + std::to_string(y.rows()));
    }
    if (x.rows() < x.cols()) {
        throw rank_deficient_error(std::string(op) + ": design " + std::to_string(x.rows()) + "x" +
                                   std::to_string(x.cols()) + " cannot have full column rank");
    }
}

OlsFit ols_fit(const Matrix& x, const Matrix& y, double rank_tol) {
    check_regression_shapes(x, y, "ols_fit");
    const Matrix xt = transpose(x);
    const Matrix gram = symmetrize(matmul(xt, x));
    const Matrix rhs = matmul(xt, y);

    Matrix beta = solve_spd(gram, rhs, rank_tol);
    Matrix fitted = matmul(x, beta);
    const double residual_norm = frobenius_norm(y - fitted);
    return OlsFit{std::move(beta), std::move(fitted), residual_norm};
}

Matrix hat_projection(const Matrix& x, const Matrix& y) {
    check_regression_shapes(x, y, "hat_projection");
    const SpectralFactor sf = whitening_factor(empirical_covariance(x));
    const double inv_n = 1.0 / static_cast<double>(x.rows());

    // (1/n) (X L) (X L)t Y, with the k-vector (X L)t Y formed first.
    const Matrix xl = matmul(x, sf.whitening);
    return inv_n * matmul(xl, matmul(transpose(xl), y));
}

}  // namespace olsattn
