#include "olsattn/trainer.hpp"

#include <cmath>
#include <string>

#include "olsattn/ols.hpp"
#include "olsattn/rng.hpp"

namespace olsattn {

ScalarModel ScalarModel::create(Matrix x, Matrix y, double l0) {
    if (x.cols() != 1 || y.cols() != 1 || x.rows() != y.rows()) {
        throw dimension_error("ScalarModel: x and y must be matching column vectors");
    }
    double s = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        s += x(i, 0) * x(i, 0);
        c += x(i, 0) * y(i, 0);
    }
    if (s <= 0.0) {
        throw rank_deficient_error("ScalarModel: Xt X = " + std::to_string(s) + ", inputs are all zero");
    }
    return ScalarModel{l0, std::move(x), std::move(y), s, c};
}

namespace {

double quartic_coeff(const ScalarModel& model) {
    const double n = static_cast<double>(model.x.rows());
    const double l2 = model.l * model.l;
    return l2 * l2 * model.s * model.c / (n * n);
}

}  // namespace

Matrix predict(const ScalarModel& model) { return quartic_coeff(model) * model.x; }

std::pair<double, double> loss_and_grad(const ScalarModel& model) {
    const double n = static_cast<double>(model.x.rows());
    const double a = quartic_coeff(model);
    const double da_dl = 4.0 * model.l * model.l * model.l * model.s * model.c / (n * n);

    double mse = 0.0;
    double inner = 0.0;  // (yhat - y)t x
    for (std::size_t i = 0; i < model.x.rows(); ++i) {
        const double r = a * model.x(i, 0) - model.y(i, 0);
        mse += r * r;
        inner += r * model.x(i, 0);
    }
    mse /= n;
    const double grad = (2.0 / n) * inner * da_dl;
    return {mse, grad};
}

std::pair<AdamState, double> adam_step(const AdamState& state, double grad, double param) {
    AdamState next = state;
    next.step = state.step + 1;
    next.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
    next.v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad;
    const double m_hat = next.m / (1.0 - std::pow(state.beta1, static_cast<double>(next.step)));
    const double v_hat = next.v / (1.0 - std::pow(state.beta2, static_cast<double>(next.step)));
    const double updated = param - next.lr * m_hat / (std::sqrt(v_hat) + next.eps);
    return {next, updated};
}

std::pair<Matrix, Matrix> generate_task(std::size_t n, double slope, double noise_var, std::uint64_t seed,
                                        InputDistribution dist) {
    if (n < 2) {
        throw dimension_error("generate_task: need at least 2 samples, got " + std::to_string(n));
    }
    if (noise_var < 0.0) {
        throw dimension_error("generate_task: noise variance must be nonnegative");
    }
    Rng rng(seed);
    Matrix x(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = dist == InputDistribution::uniform ? rng.uniform(-1.0, 1.0) : rng.gaussian();
    }
    const double noise_sd = std::sqrt(noise_var);
    Matrix y(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        y(i, 0) = slope * x(i, 0) + (noise_sd > 0.0 ? rng.gaussian(0.0, noise_sd) : 0.0);
    }
    return {std::move(x), std::move(y)};
}

TrainingTrace train(const TrainConfig& config) {
    if (config.epochs < 1) {
        throw dimension_error("train: epochs must be at least 1");
    }
    if (config.record_every < 1) {
        throw dimension_error("train: record_every must be at least 1");
    }
    auto [x, y] = generate_task(config.n, config.slope, config.noise_var, config.seed, config.dist);
    ScalarModel model = ScalarModel::create(std::move(x), std::move(y), config.l0);

    const double n = static_cast<double>(config.n);
    const double l_star = std::sqrt(n / model.s);  // ((1/n) Xt X)^(-1/2)

    const Matrix ols_fitted = ols_fit(model.x, model.y).fitted;
    const double ols_norm = frobenius_norm(ols_fitted);

    AdamState adam;
    adam.lr = config.lr;
    adam.beta1 = config.beta1;
    adam.beta2 = config.beta2;
    adam.eps = config.eps;

    TrainingTrace trace;
    trace.l_star = l_star;
    trace.seed = config.seed;
    trace.config = config;
    trace.records.reserve(config.epochs / config.record_every + 1);

    std::size_t near_zero_run = 0;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        auto [loss, grad] = loss_and_grad(model);
        if (!std::isfinite(loss) || std::abs(model.l) > 1e6) {
            throw numerical_error("train: diverged at epoch " + std::to_string(epoch) + " (l = " +
                                  std::to_string(model.l) + ", loss = " + std::to_string(loss) + ")");
        }
        auto [next_state, next_l] = adam_step(adam, grad, model.l);
        adam = next_state;
        model.l = next_l;

        // The quartic is flat at l = 0; a long stay there means no progress.
        if (std::abs(model.l) < 1e-6) {
            if (++near_zero_run == 100 && !trace.near_zero_stall_epoch) {
                trace.near_zero_stall_epoch = epoch;
            }
        } else {
            near_zero_run = 0;
        }

        if (epoch % config.record_every == 0 || epoch == config.epochs) {
            const Matrix yhat = predict(model);
            double mse = 0.0;
            for (std::size_t i = 0; i < model.x.rows(); ++i) {
                const double r = yhat(i, 0) - model.y(i, 0);
                mse += r * r;
            }
            mse /= n;
            const double rel = frobenius_norm(yhat - ols_fitted) / ols_norm;
            trace.records.push_back(TraceRecord{epoch, mse, rel, model.l});
        }
    }
    return trace;
}

std::optional<std::size_t> first_crossing_epoch(const TrainingTrace& trace, double threshold,
                                                ConvergenceMetric metric) {
    for (const TraceRecord& rec : trace.records) {
        const double value = metric == ConvergenceMetric::structural
                                 ? std::abs(rec.l_value - trace.l_star) / trace.l_star
                                 : rec.rel_dist_to_ols;
        if (value < threshold) return rec.epoch;
    }
    return std::nullopt;
}

namespace {

struct GeneralParams {
    Matrix projection;  // shared by w_q, w_k, w_v
    Matrix head;        // k x 1

    TransformerParams materialize() const {
        return TransformerParams{projection, projection, projection, Matrix::identity(projection.rows()), head};
    }
};

double general_mse(const GeneralParams& p, const Matrix& x, const Matrix& y) {
    const Matrix out = forward(p.materialize(), x);
    double mse = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        const double r = out(i, 0) - y(i, 0);
        mse += r * r;
    }
    return mse / static_cast<double>(y.rows());
}

}  // namespace

GeneralTrainingTrace train_general(const Matrix& x, const Matrix& y, const GeneralTrainConfig& config) {
    const std::size_t k = x.cols();
    if (k > 4) {
        throw dimension_error("train_general: finite-difference training is limited to k <= 4, got k = " +
                              std::to_string(k));
    }
    if (config.epochs < 1) {
        throw dimension_error("train_general: epochs must be at least 1");
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());

    GeneralParams params{config.init_scale * Matrix::identity(k),
                         inv_n * (config.init_scale * matmul(transpose(x), y))};

    const Matrix ols_fitted = ols_fit(x, y).fitted;
    const double ols_norm = frobenius_norm(ols_fitted);

    const std::size_t param_count = k * k + k;
    auto param_ref = [&](std::size_t idx) -> double& {
        if (idx < k * k) return params.projection(idx / k, idx % k);
        return params.head(idx - k * k, 0);
    };

    std::vector<AdamState> adam(param_count);
    for (AdamState& s : adam) {
        s.lr = config.lr;
        s.beta1 = config.beta1;
        s.beta2 = config.beta2;
        s.eps = config.eps;
    }

    GeneralTrainingTrace trace{{}, params.materialize()};
    trace.records.reserve(config.epochs / config.record_every + 1);
    std::vector<double> grads(param_count);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        for (std::size_t idx = 0; idx < param_count; ++idx) {
            double& slot = param_ref(idx);
            const double saved = slot;
            slot = saved + config.fd_step;
            const double up = general_mse(params, x, y);
            slot = saved - config.fd_step;
            const double down = general_mse(params, x, y);
            slot = saved;
            grads[idx] = (up - down) / (2.0 * config.fd_step);
        }
        for (std::size_t idx = 0; idx < param_count; ++idx) {
            double& slot = param_ref(idx);
            auto [next_state, next_value] = adam_step(adam[idx], grads[idx], slot);
            adam[idx] = next_state;
            slot = next_value;
        }
        if (epoch % config.record_every == 0 || epoch == config.epochs) {
            const double mse = general_mse(params, x, y);
            if (!std::isfinite(mse)) {
                throw numerical_error("train_general: loss became non-finite at epoch " + std::to_string(epoch));
            }
            const Matrix out = forward(params.materialize(), x);
            trace.records.push_back(GeneralTraceRecord{epoch, mse, frobenius_norm(out - ols_fitted) / ols_norm});
        }
    }
    trace.final_params = params.materialize();
    return trace;
}

}  // namespace olsattn
