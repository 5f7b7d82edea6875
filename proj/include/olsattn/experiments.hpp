#ifndef OLSATTN_EXPERIMENTS_HPP
#define OLSATTN_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "olsattn/attention.hpp"
#include "olsattn/matrix.hpp"
#include "olsattn/memory_shift.hpp"
#include "olsattn/rng.hpp"

namespace olsattn {

/// One synthetic regression problem: n x k design, n x 1 response, and the
/// coefficients the response was built from.
struct RegressionInstance {
    Matrix x;
    Matrix y;
    Matrix beta;
};

/// Draws a design (Gaussian or uniform on [-1, 1] entries), Gaussian
/// coefficients, and y = X beta + noise_sd * eps.
RegressionInstance random_regression(Rng& rng, std::size_t n, std::size_t k, bool gaussian_design,
                                     double noise_sd);

struct EquivTrial {
    std::size_t trial;
    std::size_t n;
    std::size_t k;
    EquivalenceReport report;
};

struct EquivSweepConfig {
    std::size_t trials = 100;
    std::size_t max_n = 200;
    std::size_t max_k = 8;
    std::uint64_t seed = 7;
    bool debug_scores = false;
};

/// Runs `trials` independent instances with dimensions drawn per trial:
/// k in [1, min(max_k, max_n)] and n in [k+1, max_n] (clamped so square
/// full-rank designs are allowed when max_n <= k). Trials alternate between
/// Gaussian/uniform designs and noisy/noise-free responses. Each trial is
/// seeded from (seed, trial index), so rows are reproducible individually.
std::vector<EquivTrial> equivalence_sweep(const EquivSweepConfig& config);

/// n x k design whose empirical covariance is the identity exactly (fresh
/// Gaussian sample recolored by its own whitening factor). Rotating such a
/// design leaves its covariance unchanged, which makes rotation sweeps an
/// analytic no-op.
Matrix isotropic_design(std::size_t n, std::size_t k, std::uint64_t seed);

struct ShiftSweepRow {
    std::string shift_kind;
    double shift_param;
    double relative_error;
    double distortion_dist;  // || sigma_x^(-1) sigma_z - I ||_F
};

struct ShiftSweepConfig {
    std::size_t n = 500;
    std::size_t k = 3;
    std::size_t m = 0;  // 0 -> n
    std::uint64_t seed = 1;
    ShiftSpec::Kind kind = ShiftSpec::Kind::scale;
    double grid_lo = 0.5;
    double grid_hi = 2.0;
    double grid_step = 0.25;
};

/// Expands lo:hi:step into lo, lo+step, ... (inclusive of hi up to
/// floating-point slack). step must be positive and hi >= lo.
std::vector<double> grid_values(double lo, double hi, double step);

/// Sweeps the shift parameter over the grid against one fixed training set
/// (an isotropic design with Gaussian ground-truth coefficients). Parameter
/// meaning per kind: scale -> entry factor on Z, rotate -> angle in radians
/// in the first coordinate plane, anisotropic -> factor on the first
/// coordinate only.
std::vector<ShiftSweepRow> shift_sweep(const ShiftSweepConfig& config);

const char* shift_kind_name(ShiftSpec::Kind kind);

}  // namespace olsattn

#endif
