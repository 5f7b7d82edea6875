#ifndef OLSATTN_OLS_HPP
#define OLSATTN_OLS_HPP

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Closed-form least-squares fit: beta solves the normal equations,
/// fitted = X beta, residual_norm = ||Y - fitted||_2.
struct OlsFit {
    Matrix beta;
    Matrix fitted;
    double residual_norm;
};

/// Least squares via Cholesky on the normal equations Xt X beta = Xt Y.
///
/// This route never touches the spectral whitening factor, so it serves as
/// the independent benchmark for the attention construction. Throws
/// rank_deficient_error when a Cholesky pivot falls under rank_tol relative
/// to the Gram diagonal (X not full column rank).
OlsFit ols_fit(const Matrix& x, const Matrix& y, double rank_tol = 1e-10);

/// Fitted values through the spectral route: with L the whitening factor of
/// (1/n) Xt X, computes (1/n) (X L) (X L)t Y. Agrees with ols_fit().fitted
/// on every full-rank instance; the agreement is what the tests check.
Matrix hat_projection(const Matrix& x, const Matrix& y);

/// Shared preconditions for (design, response) pairs: y is a column vector
/// with matching row count and the design has at least as many rows as
/// columns. Throws dimension_error or rank_deficient_error, prefixing
/// messages with op.
void check_regression_shapes(const Matrix& x, const Matrix& y, const char* op = "regression");

}  // namespace olsattn

#endif
