#ifndef OLSATTN_SPECTRAL_HPP
#define OLSATTN_SPECTRAL_HPP

#include <vector>

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Eigensystem of a symmetric matrix: orthogonal V (eigenvectors in
/// columns) and eigenvalues in descending order.
struct EigenDecomposition {
    Matrix eigenvectors;
    std::vector<double> eigenvalues;
};

/// Eigensystem of an SPD covariance plus the derived whitening factor
/// L = V diag(eigenvalues)^(-1/2). L satisfies L Lt = cov^(-1), and for
/// cov = (1/n) Xt X the columns of X L are orthonormal up to sqrt(n).
struct SpectralFactor {
    Matrix eigenvectors;
    std::vector<double> eigenvalues;
    Matrix whitening;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// The input must be square with max-abs asymmetry at most 1e-12 relative
/// to its largest entry; it is symmetrized before decomposing. Rotations
/// sweep all (p, q) pairs until every off-diagonal entry is negligible
/// relative to sqrt(|a_pp a_qq|), which keeps small eigenvalues accurate
/// even on strongly graded spectra. Throws numerical_error if the sweep
/// budget is exhausted or the residual ||MV - V diag|| exceeds
/// tol * ||M||_maxabs. Eigenvalues come back descending; each eigenvector
/// has its largest-magnitude component made positive.
EigenDecomposition symmetric_eigendecompose(const Matrix& m, double tol = 1e-10);

/// Whitening factor of an SPD covariance.
///
/// Throws rank_deficient_error when the smallest eigenvalue is at or below
/// rank_tol times the largest (the design behind the covariance is not
/// usably full column rank). No regularization is applied below the gate.
SpectralFactor whitening_factor(const Matrix& cov, double rank_tol = 1e-10);

}  // namespace olsattn

#endif
