#include "olsattn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "olsattn/errors.hpp"
#include "olsattn/ols.hpp"
#include "olsattn/spectral.hpp"

namespace olsattn {

RegressionInstance random_regression(Rng& rng, std::size_t n, std::size_t k, bool gaussian_design,
                                     double noise_sd) {
    if (k == 0 || n < k) {
        throw dimension_error("regression instance needs n >= k >= 1, got n=" + std::to_string(n) +
                              ", k=" + std::to_string(k));
    }
    Matrix x = gaussian_design ? rng.gaussian_matrix(n, k) : rng.uniform_matrix(n, k, -1.0, 1.0);
    Matrix beta(k, 1);
    for (std::size_t j = 0; j < k; ++j) beta(j, 0) = rng.gaussian();
    Matrix y = matmul(x, beta);
    if (noise_sd > 0.0) {
        for (std::size_t i = 0; i < n; ++i) y(i, 0) += rng.gaussian(0.0, noise_sd);
    }
    return RegressionInstance{std::move(x), std::move(y), std::move(beta)};
}

std::vector<EquivTrial> equivalence_sweep(const EquivSweepConfig& config) {
    if (config.trials == 0 || config.max_k == 0 || config.max_n < 2) {
        throw dimension_error("equivalence sweep needs trials >= 1, k >= 1, n >= 2");
    }
    std::vector<EquivTrial> rows;
    rows.reserve(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng(Rng::derive_seed(config.seed, t));
        const std::size_t k = rng.uniform_index(1, std::min(config.max_k, config.max_n));
        const std::size_t n = rng.uniform_index(std::min(k + 1, config.max_n), config.max_n);
        const bool gaussian_design = (t % 2 == 0);
        const double noise_sd = (t % 4 < 2) ? 0.0 : 0.1;
        RegressionInstance inst = random_regression(rng, n, k, gaussian_design, noise_sd);
        rows.push_back(EquivTrial{t, n, k, equivalence_report(inst.x, inst.y, config.debug_scores)});
    }
    return rows;
}

Matrix isotropic_design(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0 || n <= k) {
        throw dimension_error("isotropic design needs n > k >= 1, got n=" + std::to_string(n) +
                              ", k=" + std::to_string(k));
    }
    Rng rng(seed);
    Matrix g = rng.gaussian_matrix(n, k);
    SpectralFactor sf = whitening_factor(empirical_covariance(g));
    return matmul(g, sf.whitening);
}

std::vector<double> grid_values(double lo, double hi, double step) {
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw dimension_error("grid needs finite lo <= hi and step > 0");
    }
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1.0 + 1e-9));
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
}

const char* shift_kind_name(ShiftSpec::Kind kind) {
    switch (kind) {
        case ShiftSpec::Kind::scale:
            return "scale";
        case ShiftSpec::Kind::rotate:
            return "rotate";
        case ShiftSpec::Kind::anisotropic:
            return "anisotropic";
    }
    return "unknown";
}

namespace {

ShiftSpec make_spec(ShiftSpec::Kind kind, double param, std::size_t k) {
    switch (kind) {
        case ShiftSpec::Kind::scale:
            return ShiftSpec::scale(param);
        case ShiftSpec::Kind::rotate:
            return ShiftSpec::rotate_angle(param);
        case ShiftSpec::Kind::anisotropic: {
            std::vector<double> factors(k, 1.0);
            factors[0] = param;
            return ShiftSpec::anisotropic(std::move(factors));
        }
    }
    throw dimension_error("unknown shift kind");
}

}  // namespace

std::vector<ShiftSweepRow> shift_sweep(const ShiftSweepConfig& config) {
    if (config.kind == ShiftSpec::Kind::rotate && config.k < 2) {
        throw dimension_error("rotation sweep needs k >= 2");
    }
    const std::vector<double> params = grid_values(config.grid_lo, config.grid_hi, config.grid_step);

    Matrix x = isotropic_design(config.n, config.k, Rng::derive_seed(config.seed, 0));
    Rng rng(Rng::derive_seed(config.seed, 1));
    Matrix beta(config.k, 1);
    for (std::size_t j = 0; j < config.k; ++j) beta(j, 0) = rng.gaussian();
    Matrix y = matmul(x, beta);

    const Matrix ident = Matrix::identity(config.k);
    std::vector<ShiftSweepRow> rows;
    rows.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        ShiftSpec spec = make_spec(config.kind, params[i], config.k);
        ShiftReport report =
            shift_experiment(x, y, spec, Rng::derive_seed(config.seed, 2 + i), config.m, 0.0);
        rows.push_back(ShiftSweepRow{shift_kind_name(config.kind), params[i], report.relative_error,
                                     frobenius_norm(report.distortion - ident)});
    }
    return rows;
}

}  // namespace olsattn
