#ifndef OLSATTN_MEMORY_SHIFT_HPP
#define OLSATTN_MEMORY_SHIFT_HPP

#include <cstdint>
#include <vector>

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Inference-time context: m x k design Z, responses Y_z, and the
/// ground-truth coefficients they were generated from (Y_z = Z beta when
/// built noise-free).
struct ContextTask {
    Matrix z;
    Matrix y_z;
    Matrix beta_true;
};

/// How a context design deviates from the training distribution. Each
/// family transforms the rows of an exactly covariance-matched fresh
/// sample, so the induced covariance change is analytically known:
///   scale(f):        Z -> f * Z,        cov scales by f^2
///   rotate:          Z -> Z * Q,        cov -> Qt cov Q
///   anisotropic(d):  Z -> Z * diag(d),  cov -> diag(d) cov diag(d)
class ShiftSpec {
public:
    enum class Kind { scale, rotate, anisotropic };

    static ShiftSpec scale(double entry_factor);
    /// Rotation by `radians` in the first coordinate plane; needs k >= 2.
    static ShiftSpec rotate_angle(double radians);
    static ShiftSpec rotate(Matrix orthogonal);
    static ShiftSpec anisotropic(std::vector<double> factors);

    Kind kind() const { return kind_; }
    double param() const { return param_; }

    /// Applies the transform to a context design.
    Matrix apply(const Matrix& z) const;

private:
    ShiftSpec(Kind kind, double param, std::vector<double> factors, std::vector<Matrix> orthogonal)
        : kind_(kind), param_(param), factors_(std::move(factors)), orthogonal_(std::move(orthogonal)) {}

    Kind kind_;
    double param_ = 0.0;
    std::vector<double> factors_;
    std::vector<Matrix> orthogonal_;  // empty or one explicit matrix
};

/// Outcome of a context-shift run: training and context covariances, the
/// distortion factor that multiplies beta in the prediction, and the
/// prediction error against the ideal Z beta.
struct ShiftReport {
    Matrix sigma_x;
    Matrix sigma_z;
    Matrix distortion;  // sigma_x^(-1) sigma_z
    Matrix predicted;
    Matrix ideal;
    double relative_error;
};

/// Context prediction (1/m) Z (L Lt) Zt Y_z, formed as the fixed k x k
/// block L Lt (the statistics learned from training) times the k-vector
/// (1/m) Zt Y_z assembled from the current context, then mapped back
/// through Z. Only k-sized intermediates are built.
Matrix context_predict(const Matrix& whitening, const ContextTask& task);

/// sigma_x^(-1) sigma_z of the two designs' empirical covariances, via
/// Cholesky solve (no explicit inverse). Throws rank_deficient_error when
/// either design is rank deficient.
Matrix distortion_matrix(const Matrix& x, const Matrix& z);

/// End-to-end shift experiment on training data (x, y):
/// draws a fresh m x k context sample, recolors it so its empirical
/// covariance matches the training covariance exactly, applies the shift,
/// builds noise-free responses Y_z = Z beta (beta fit from x, y; noise_var
/// adds optional Gaussian noise for exploratory runs), and measures the
/// prediction error of the whitening-configured model.
ShiftReport shift_experiment(const Matrix& x, const Matrix& y, const ShiftSpec& spec, std::uint64_t seed,
                             std::size_t m = 0 /* 0 -> x.rows() */, double noise_var = 0.0);

}  // namespace olsattn

#endif
