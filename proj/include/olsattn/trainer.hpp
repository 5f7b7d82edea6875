#ifndef OLSATTN_TRAINER_HPP
#define OLSATTN_TRAINER_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "olsattn/attention.hpp"
#include "olsattn/matrix.hpp"

namespace olsattn {

/// Scalar-constrained attention model on a 1-D regression task. All three
/// projections equal the scalar l and the head is recomputed from l as
/// (1/n) l Xt Y, so prediction(l) = (l^4 s c / n^2) X with the cached
/// moments s = Xt X and c = Xt Y. The single learnable parameter is l.
struct ScalarModel {
    double l;
    Matrix x;  // n x 1
    Matrix y;  // n x 1
    double s;  // Xt X
    double c;  // Xt Y

    static ScalarModel create(Matrix x, Matrix y, double l0);
};

/// Prediction vector (l^4 s c / n^2) X at the model's current l.
Matrix predict(const ScalarModel& model);

/// Mean squared error and its analytic derivative with respect to l.
std::pair<double, double> loss_and_grad(const ScalarModel& model);

struct AdamState {
    std::uint64_t step = 0;
    double m = 0.0;
    double v = 0.0;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam update; returns the advanced state and the new
/// parameter value.
std::pair<AdamState, double> adam_step(const AdamState& state, double grad, double param);

enum class InputDistribution { uniform, gaussian };

/// 1-D regression task y = slope * x + noise. Inputs are uniform on
/// [-1, 1] by default (or standard normal); noise is Gaussian with the
/// given variance. Fixed seeds reproduce the dataset exactly.
std::pair<Matrix, Matrix> generate_task(std::size_t n, double slope, double noise_var, std::uint64_t seed,
                                        InputDistribution dist = InputDistribution::uniform);

struct TrainConfig {
    std::size_t n = 500;
    double slope = 2.0;
    double noise_var = 1e-4;
    double l0 = 0.5;
    std::size_t epochs = 5000;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 1;
    InputDistribution dist = InputDistribution::uniform;
    std::size_t record_every = 1;  // thin the trace for long runs
};

struct TraceRecord {
    std::size_t epoch;
    double mse;
    double rel_dist_to_ols;
    double l_value;
};

struct TrainingTrace {
    std::vector<TraceRecord> records;
    double l_star;       // ((1/n) Xt X)^(-1/2), computed once from the data
    std::uint64_t seed;
    TrainConfig config;
    // Set when |l| stayed under 1e-6 for 100 consecutive epochs (the loss is
    // flat at l = 0, so such a run is stuck); callers decide how to warn.
    std::optional<std::size_t> near_zero_stall_epoch;
};

/// Full-batch training of the scalar model. Records metrics after each
/// epoch's update (every record_every epochs, final epoch always).
/// Throws numerical_error if |l| exceeds 1e6 or the loss turns non-finite.
TrainingTrace train(const TrainConfig& config);

enum class ConvergenceMetric { structural, functional };

/// First recorded epoch at which the chosen metric drops below threshold:
/// |l - l*| / l* for structural, rel_dist_to_ols for functional.
std::optional<std::size_t> first_crossing_epoch(const TrainingTrace& trace, double threshold,
                                                ConvergenceMetric metric);

/// Unconstrained probe: trains a shared k x k projection (used for all of
/// w_q, w_k, w_v) plus a free k x 1 head with Adam on central
/// finite-difference gradients. Costly (2(k^2 + k) forward passes per
/// epoch), so limited to k <= 4.
struct GeneralTrainConfig {
    std::size_t epochs = 2000;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double fd_step = 1e-6;
    double init_scale = 0.5;  // initial projection = init_scale * I
    std::size_t record_every = 1;
};

struct GeneralTraceRecord {
    std::size_t epoch;
    double mse;
    double rel_dist_to_ols;
};

struct GeneralTrainingTrace {
    std::vector<GeneralTraceRecord> records;
    TransformerParams final_params;
};

GeneralTrainingTrace train_general(const Matrix& x, const Matrix& y, const GeneralTrainConfig& config);

}  // namespace olsattn

#endif
