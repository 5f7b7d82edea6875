#include "olsattn/attention.hpp"

#include <cmath>
#include <string>

#include "olsattn/ols.hpp"
#include "olsattn/spectral.hpp"

namespace olsattn {

void validate_params(const TransformerParams& params) {
    const std::size_t k = params.w_q.rows();
    auto square_k = [k](const Matrix& m, const char* name) {
        if (m.rows() != k || m.cols() != k) {
            throw dimension_error(std::string(name) + " must be " + std::to_string(k) + "x" + std::to_string(k) +
                                  ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        }
    };
    square_k(params.w_q, "w_q");
    square_k(params.w_k, "w_k");
    square_k(params.w_v, "w_v");
    square_k(params.w_ffn, "w_ffn");
    if (params.w_p.rows() != k || params.w_p.cols() != 1) {
        throw dimension_error("w_p must be " + std::to_string(k) + "x1, got " + std::to_string(params.w_p.rows()) +
                              "x" + std::to_string(params.w_p.cols()));
    }
}

Matrix forward(const TransformerParams& params, const Matrix& x, bool debug_scores) {
    validate_params(params);
    if (x.cols() != params.w_q.rows()) {
        throw dimension_error("forward: input has " + std::to_string(x.cols()) + " columns but weights are " +
                              std::to_string(params.w_q.rows()) + "-dimensional");
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());

    const Matrix queries = matmul(x, params.w_q);
    const Matrix keys = matmul(x, params.w_k);
    const Matrix values = matmul(x, params.w_v);

    // k x k key-value block first, then two thin products.
    const Matrix key_value = matmul(transpose(keys), values);
    const Matrix head = matmul(params.w_ffn, params.w_p);
    Matrix out = inv_n * matmul(queries, matmul(key_value, head));

    if (debug_scores) {
        // Reference route through the n x n score matrix.
        const Matrix scores = matmul(queries, transpose(keys));
        const Matrix via_scores = inv_n * matmul(scores, matmul(values, head));
        const double diff = max_abs(out - via_scores);
        const double bound = 1e-10 * std::max(1.0, max_abs(out));
        if (diff > bound) {
            throw numerical_error("forward: association orders disagree by " + std::to_string(diff) +
                                  " (bound " + std::to_string(bound) + ")");
        }
    }
    return out;
}

OlsConfiguration construct_ols_params(const Matrix& x, const Matrix& y) {
    if (y.cols() != 1 || y.rows() != x.rows()) {
        throw dimension_error("construct_ols_params: response must be " + std::to_string(x.rows()) + "x1");
    }
    const std::size_t k = x.cols();
    const double inv_n = 1.0 / static_cast<double>(x.rows());

    SpectralFactor sf = whitening_factor(empirical_covariance(x));
    Matrix coord = inv_n * matmul(transpose(sf.whitening), matmul(transpose(x), y));

    TransformerParams params{sf.whitening, sf.whitening, sf.whitening, Matrix::identity(k), coord};
    return OlsConfiguration{std::move(params), std::move(coord), std::move(sf.whitening)};
}

EquivalenceReport equivalence_report(const Matrix& x, const Matrix& y, bool debug_scores) {
    const OlsConfiguration config = construct_ols_params(x, y);
    const OlsFit fit = ols_fit(x, y);
    const Matrix out = forward(config.params, x, debug_scores);

    const Matrix diff = out - fit.fitted;
    const double denom = frobenius_norm(fit.fitted);
    const double rel = denom > 0.0 ? frobenius_norm(diff) / denom : (frobenius_norm(diff) > 0.0 ? HUGE_VAL : 0.0);

    const double inv_n = 1.0 / static_cast<double>(x.rows());
    const Matrix xl = matmul(x, config.whitening);
    const Matrix ident_resid = inv_n * matmul(transpose(xl), xl) - Matrix::identity(x.cols());

    return EquivalenceReport{max_abs(diff), rel, max_abs(ident_resid)};
}

}  // namespace olsattn
