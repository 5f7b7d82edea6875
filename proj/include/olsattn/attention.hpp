#ifndef OLSATTN_ATTENTION_HPP
#define OLSATTN_ATTENTION_HPP

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Weights of the single-layer linear-attention network: three k x k
/// projections, a k x k feed-forward map (pure linear, no activation or
/// bias), and a k x 1 output head.
struct TransformerParams {
    Matrix w_q;
    Matrix w_k;
    Matrix w_v;
    Matrix w_ffn;
    Matrix w_p;
};

/// Parameter configuration under which the forward pass reproduces the
/// least-squares projection: w_q = w_k = w_v = whitening, w_ffn = I, and
/// w_p = coordinate_vector = (1/n) Lt Xt Y.
struct OlsConfiguration {
    TransformerParams params;
    Matrix coordinate_vector;
    Matrix whitening;
};

/// Raw residuals of the attention-vs-least-squares comparison. Thresholds
/// are the caller's policy; this record only measures.
struct EquivalenceReport {
    double max_abs_diff;
    double rel_frobenius_diff;
    double whitening_residual;  // ||(1/n) Lt Xt X L - I||_maxabs
};

void validate_params(const TransformerParams& params);

/// Forward pass (1/n) (X Wq) (X Wk)t (X Wv) Wffn Wp.
///
/// The product is associated as (X Wq) * [(X Wk)t (X Wv)] * Wffn * Wp so
/// only k x k intermediates are formed, never the n x n score matrix; the
/// result is identical by associativity at O(n k^2) cost. With debug_scores
/// set, the n x n score route is also materialized and both routes must
/// agree to 1e-10 (relative to the output scale) or numerical_error is
/// thrown.
Matrix forward(const TransformerParams& params, const Matrix& x, bool debug_scores = false);

/// Builds the weight configuration that makes forward() compute the OLS
/// fitted values of (x, y). Throws rank_deficient_error when x is not full
/// column rank.
OlsConfiguration construct_ols_params(const Matrix& x, const Matrix& y);

/// Runs both routes on one instance and reports their residuals.
/// debug_scores is forwarded to forward().
EquivalenceReport equivalence_report(const Matrix& x, const Matrix& y, bool debug_scores = false);

}  // namespace olsattn

#endif
