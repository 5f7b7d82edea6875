#include "olsattn/memory_shift.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "olsattn/cholesky.hpp"
#include "olsattn/errors.hpp"
#include "olsattn/ols.hpp"
#include "olsattn/rng.hpp"
#include "olsattn/spectral.hpp"

namespace olsattn {

namespace {

constexpr double kRankTol = 1e-10;

void check_orthogonal(const Matrix& q) {
    if (q.rows() != q.cols()) {
        throw dimension_error("rotation matrix must be square, got " + std::to_string(q.rows()) + "x" +
                              std::to_string(q.cols()));
    }
    Matrix gram = matmul(transpose(q), q);
    double residual = max_abs(gram - Matrix::identity(q.cols()));
    if (residual > 1e-10) {
        throw numerical_error("rotation matrix is not orthogonal, QtQ deviates from identity by " +
                              std::to_string(residual));
    }
}

/// k x k symmetric square root V diag(sqrt(lambda)) Vt of an SPD matrix.
Matrix spd_sqrt(const Matrix& m) {
    EigenDecomposition eig = symmetric_eigendecompose(m);
    const std::size_t k = m.rows();
    Matrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < k; ++j) {
        if (eig.eigenvalues[j] <= 0.0) {
            throw rank_deficient_error("matrix square root needs positive eigenvalues, got " +
                                       std::to_string(eig.eigenvalues[j]));
        }
        double root = std::sqrt(eig.eigenvalues[j]);
        for (std::size_t i = 0; i < k; ++i) scaled(i, j) *= root;
    }
    return matmul(scaled, transpose(eig.eigenvectors));
}

/// Fresh m x k sample whose empirical covariance equals target_cov exactly:
/// draw Gaussian G, whiten it with its own spectral factor, then color by
/// the target's symmetric square root.
Matrix matched_sample(Rng& rng, std::size_t m, const Matrix& target_cov) {
    const std::size_t k = target_cov.rows();
    Matrix g = rng.gaussian_matrix(m, k);
    SpectralFactor sf = whitening_factor(empirical_covariance(g), kRankTol);
    return matmul(matmul(g, sf.whitening), spd_sqrt(target_cov));
}

}  // namespace

ShiftSpec ShiftSpec::scale(double entry_factor) {
    if (!(entry_factor > 0.0)) {
        throw dimension_error("scale factor must be positive, got " + std::to_string(entry_factor));
    }
    return ShiftSpec(Kind::scale, entry_factor, {}, {});
}

ShiftSpec ShiftSpec::rotate_angle(double radians) {
    if (!std::isfinite(radians)) {
        throw dimension_error("rotation angle must be finite");
    }
    return ShiftSpec(Kind::rotate, radians, {}, {});
}

ShiftSpec ShiftSpec::rotate(Matrix orthogonal) {
    check_orthogonal(orthogonal);
    std::vector<Matrix> qs;
    qs.push_back(std::move(orthogonal));
    return ShiftSpec(Kind::rotate, 0.0, {}, std::move(qs));
}

ShiftSpec ShiftSpec::anisotropic(std::vector<double> factors) {
    if (factors.empty()) {
        throw dimension_error("anisotropic shift needs at least one factor");
    }
    for (double f : factors) {
        if (!(f > 0.0)) {
            throw dimension_error("anisotropic factors must be positive, got " + std::to_string(f));
        }
    }
    return ShiftSpec(Kind::anisotropic, 0.0, std::move(factors), {});
}

Matrix ShiftSpec::apply(const Matrix& z) const {
    const std::size_t k = z.cols();
    switch (kind_) {
        case Kind::scale:
            return param_ * z;
        case Kind::rotate: {
            if (!orthogonal_.empty()) {
                const Matrix& q = orthogonal_.front();
                if (q.rows() != k) {
                    throw dimension_error("rotation matrix is " + std::to_string(q.rows()) + "x" +
                                          std::to_string(q.cols()) + " but design has " + std::to_string(k) +
                                          " columns");
                }
                return matmul(z, q);
            }
            if (k < 2) {
                throw dimension_error("planar rotation needs at least 2 columns, got " + std::to_string(k));
            }
            Matrix q = Matrix::identity(k);
            double c = std::cos(param_);
            double s = std::sin(param_);
            q(0, 0) = c;
            q(0, 1) = -s;
            q(1, 0) = s;
            q(1, 1) = c;
            return matmul(z, q);
        }
        case Kind::anisotropic: {
            if (factors_.size() != k) {
                throw dimension_error("anisotropic shift has " + std::to_string(factors_.size()) +
                                      " factors but design has " + std::to_string(k) + " columns");
            }
            Matrix out = z;
            for (std::size_t i = 0; i < out.rows(); ++i) {
                for (std::size_t j = 0; j < k; ++j) out(i, j) *= factors_[j];
            }
            return out;
        }
    }
    throw numerical_error("unreachable shift kind");
}

Matrix context_predict(const Matrix& whitening, const ContextTask& task) {
    check_regression_shapes(task.z, task.y_z);
    if (whitening.rows() != task.z.cols() || whitening.cols() != task.z.cols()) {
        throw dimension_error("whitening factor is " + std::to_string(whitening.rows()) + "x" +
                              std::to_string(whitening.cols()) + " but context has " +
                              std::to_string(task.z.cols()) + " columns");
    }
    Matrix slow = matmul(whitening, transpose(whitening));
    Matrix fast = (1.0 / static_cast<double>(task.z.rows())) * matmul(transpose(task.z), task.y_z);
    return matmul(task.z, matmul(slow, fast));
}

Matrix distortion_matrix(const Matrix& x, const Matrix& z) {
    if (x.cols() != z.cols()) {
        throw dimension_error("designs disagree on feature count: " + std::to_string(x.cols()) + " vs " +
                              std::to_string(z.cols()));
    }
    Matrix sigma_x = empirical_covariance(x);
    Matrix sigma_z = empirical_covariance(z);
    return solve_spd(sigma_x, sigma_z, kRankTol);
}

ShiftReport shift_experiment(const Matrix& x, const Matrix& y, const ShiftSpec& spec, std::uint64_t seed,
                             std::size_t m, double noise_var) {
    check_regression_shapes(x, y);
    if (noise_var < 0.0) {
        throw dimension_error("noise variance must be nonnegative, got " + std::to_string(noise_var));
    }
    if (m == 0) m = x.rows();
    if (m <= x.cols()) {
        throw dimension_error("context needs more rows than features, got m=" + std::to_string(m) +
                              " for k=" + std::to_string(x.cols()));
    }

    Matrix sigma_x = empirical_covariance(x);
    Matrix beta = ols_fit(x, y).beta;

    Rng rng(seed);
    Matrix z = spec.apply(matched_sample(rng, m, sigma_x));
    Matrix y_z = matmul(z, beta);
    if (noise_var > 0.0) {
        double sd = std::sqrt(noise_var);
        for (std::size_t i = 0; i < y_z.rows(); ++i) y_z(i, 0) += rng.gaussian(0.0, sd);
    }
    ContextTask task{z, y_z, beta};

    SpectralFactor sf = whitening_factor(sigma_x, kRankTol);
    Matrix predicted = context_predict(sf.whitening, task);
    Matrix ideal = matmul(z, beta);

    double num = frobenius_norm(predicted - ideal);
    double den = frobenius_norm(ideal);
    double rel = den > 0.0 ? num / den : (num > 0.0 ? HUGE_VAL : 0.0);

    return ShiftReport{sigma_x, empirical_covariance(z), distortion_matrix(x, z), std::move(predicted),
                       std::move(ideal), rel};
}

}  // namespace olsattn
