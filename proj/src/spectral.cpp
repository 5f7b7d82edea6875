#include "olsattn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace olsattn {

namespace {

constexpr int kMaxSweeps = 100;
// Off-diagonal (p,q) counts as converged once |a_pq| <= kOffTol * sqrt(|a_pp a_qq|).
// This per-pair relative test is at least as strict as comparing the largest
// off-diagonal against kOffTol * max|diag|, and it preserves the relative
// accuracy of small eigenvalues on graded spectra.
constexpr double kOffTol = 1e-12;

bool pair_converged(const Matrix& a, std::size_t p, std::size_t q, double abs_floor) {
    const double off = std::abs(a(p, q));
    return off <= kOffTol * std::sqrt(std::abs(a(p, p)) * std::abs(a(q, q))) || off <= abs_floor;
}

void fix_column_signs(Matrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t lead = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > best) {
                best = std::abs(v(i, j));
                lead = i;
            }
        }
        if (v(lead, j) < 0.0) {
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
        }
    }
}

}  // namespace

EigenDecomposition symmetric_eigendecompose(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        throw dimension_error("eigendecompose: matrix is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", not square");
    }
    const std::size_t n = m.rows();
    const double scale = max_abs(m);

    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > 1e-12 * std::max(1.0, scale)) {
        throw dimension_error("eigendecompose: input asymmetry " + std::to_string(asym) + " exceeds tolerance");
    }

    Matrix a = symmetrize(m);
    Matrix v = Matrix::identity(n);
    const double abs_floor = 1e-300;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        bool all_converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (pair_converged(a, p, q, abs_floor)) continue;
                all_converged = false;

                // Rotation angle from the stable half-angle form.
                const double apq = a(p, q);
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                        a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        if (all_converged) break;
    }
    if (sweep == kMaxSweeps) {
        double worst = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) worst = std::max(worst, std::abs(a(p, q)));
        throw numerical_error("eigendecompose: no convergence in " + std::to_string(kMaxSweeps) +
                              " sweeps, max off-diagonal residual " + std::to_string(worst));
    }

    // Sort descending, permute eigenvector columns to match.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out{Matrix(n, n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    fix_column_signs(out.eigenvectors);

    // Residual gate: || M V - V diag ||_maxabs against the input scale.
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double mv = 0.0;
            for (std::size_t k = 0; k < n; ++k) mv += m(i, k) * out.eigenvectors(k, j);
            resid = std::max(resid, std::abs(mv - out.eigenvectors(i, j) * out.eigenvalues[j]));
        }
    }
    if (resid > tol * std::max(scale, 1e-300)) {
        throw numerical_error("eigendecompose: residual " + std::to_string(resid) + " exceeds tolerance " +
                              std::to_string(tol * scale));
    }
    return out;
}

SpectralFactor whitening_factor(const Matrix& cov, double rank_tol) {
    EigenDecomposition eig = symmetric_eigendecompose(cov);
    const std::size_t k = cov.rows();

    const double lambda_max = eig.eigenvalues.front();
    const double lambda_min = eig.eigenvalues.back();
    if (lambda_max <= 0.0 || lambda_min <= rank_tol * lambda_max) {
        throw rank_deficient_error("whitening: eigenvalue ratio " +
                                   std::to_string(lambda_max > 0.0 ? lambda_min / lambda_max : 0.0) +
                                   " at or below rank tolerance " + std::to_string(rank_tol) +
                                   ", design not full column rank");
    }

    Matrix whitening(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double inv_sqrt = 1.0 / std::sqrt(eig.eigenvalues[j]);
        for (std::size_t i = 0; i < k; ++i) whitening(i, j) = eig.eigenvectors(i, j) * inv_sqrt;
    }
    return SpectralFactor{std::move(eig.eigenvectors), std::move(eig.eigenvalues), std::move(whitening)};
}

}  // namespace olsattn
