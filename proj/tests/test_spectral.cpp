#include <doctest.h>

#include <cmath>
#include <cstddef>

#include "olsattn/matrix.hpp"
#include "olsattn/rng.hpp"
#include "olsattn/spectral.hpp"
#include "oracles.hpp"

using olsattn::EigenDecomposition;
using olsattn::Matrix;
using olsattn::Rng;
using olsattn::SpectralFactor;

namespace {

Matrix diag_from(const std::vector<double>& values) {
    Matrix d(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) d(i, i) = values[i];
    return d;
}

Matrix reconstruct(const EigenDecomposition& eig) {
    Matrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < scaled.cols(); ++j) {
        for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) *= eig.eigenvalues[j];
    }
    return matmul(scaled, transpose(eig.eigenvectors));
}

}  // namespace

TEST_CASE("already-diagonal input decomposes exactly") {
    EigenDecomposition eig = olsattn::symmetric_eigendecompose(diag_from({3.0, 1.0}));
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(std::fabs(eig.eigenvectors(j, j)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(std::fabs(eig.eigenvectors(0, 1)) <= 1e-14);
    CHECK(std::fabs(eig.eigenvectors(1, 0)) <= 1e-14);
}

TEST_CASE("symmetric 2x2 with known eigensystem") {
    EigenDecomposition eig = olsattn::symmetric_eigendecompose(Matrix::from_rows({{2, 1}, {1, 2}}));
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
    const double r = 1.0 / std::sqrt(2.0);
    // First column is (1,1)/sqrt(2) up to sign, second (1,-1)/sqrt(2).
    CHECK(std::fabs(eig.eigenvectors(0, 0) * eig.eigenvectors(1, 0)) == doctest::Approx(r * r).epsilon(1e-12));
    CHECK(eig.eigenvectors(0, 0) * eig.eigenvectors(1, 0) > 0.0);
    CHECK(eig.eigenvectors(0, 1) * eig.eigenvectors(1, 1) < 0.0);
    CHECK(std::fabs(eig.eigenvectors(0, 0)) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("random SPD reconstruction and orthogonality") {
    Rng rng(101);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix a = rng.gaussian_matrix(6, 6);
        Matrix m = olsattn::symmetrize(matmul(transpose(a), a) + Matrix::identity(6));
        EigenDecomposition eig = olsattn::symmetric_eigendecompose(m);

        CHECK(olsattn::max_abs(reconstruct(eig) - m) <= 1e-9 * olsattn::max_abs(m));
        Matrix vtv = matmul(transpose(eig.eigenvectors), eig.eigenvectors);
        CHECK(olsattn::max_abs(vtv - Matrix::identity(6)) <= 1e-10);
        for (std::size_t j = 1; j < eig.eigenvalues.size(); ++j) {
            CHECK(eig.eigenvalues[j - 1] >= eig.eigenvalues[j]);
        }
    }
}

TEST_CASE("eigenvector sign convention pins the decomposition") {
    Rng rng(55);
    Matrix a = rng.gaussian_matrix(5, 5);
    Matrix m = olsattn::symmetrize(matmul(transpose(a), a) + Matrix::identity(5));
    EigenDecomposition eig = olsattn::symmetric_eigendecompose(m);
    for (std::size_t j = 0; j < 5; ++j) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < 5; ++i) {
            if (std::fabs(eig.eigenvectors(i, j)) > std::fabs(eig.eigenvectors(arg, j))) arg = i;
        }
        CHECK(eig.eigenvectors(arg, j) > 0.0);
    }
}

TEST_CASE("asymmetric or non-square input is rejected") {
    CHECK_THROWS_AS(olsattn::symmetric_eigendecompose(Matrix(2, 3)), olsattn::dimension_error);
    CHECK_THROWS_AS(olsattn::symmetric_eigendecompose(Matrix::from_rows({{1, 2}, {0.5, 1}})),
                    olsattn::dimension_error);
}

TEST_CASE("identity covariance whitens to the identity") {
    SpectralFactor sf = olsattn::whitening_factor(Matrix::identity(3));
    CHECK(olsattn::max_abs(sf.whitening - Matrix::identity(3)) <= 1e-12);
}

TEST_CASE("diagonal covariance whitens to the inverse square roots") {
    SpectralFactor sf = olsattn::whitening_factor(diag_from({4.0, 0.25}));
    CHECK(sf.whitening(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(sf.whitening(1, 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::fabs(sf.whitening(0, 1)) <= 1e-13);
    CHECK(std::fabs(sf.whitening(1, 0)) <= 1e-13);
    CHECK(sf.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("whitening factor inverts the covariance against the Gauss-Jordan oracle") {
    Rng rng(202);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix a = rng.gaussian_matrix(4, 4);
        Matrix cov = olsattn::symmetrize(matmul(transpose(a), a) + 0.1 * Matrix::identity(4));
        SpectralFactor sf = olsattn::whitening_factor(cov);
        Matrix llt = matmul(sf.whitening, transpose(sf.whitening));
        Matrix inv = oracles::gauss_jordan_inverse(cov);
        CHECK(olsattn::frobenius_norm(llt - inv) <= 1e-8 * olsattn::frobenius_norm(inv));
    }
}

TEST_CASE("whitening identity holds across random designs") {
    Rng rng(303);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t k = 1 + rng.uniform_index(0, 7);
        const std::size_t n = k + 1 + rng.uniform_index(0, 60);
        Matrix x = (rep % 2 == 0) ? rng.gaussian_matrix(n, k) : rng.uniform_matrix(n, k, -1.0, 1.0);
        SpectralFactor sf = olsattn::whitening_factor(olsattn::empirical_covariance(x));
        Matrix xl = matmul(x, sf.whitening);
        Matrix resid =
            (1.0 / static_cast<double>(n)) * matmul(transpose(xl), xl) - Matrix::identity(k);
        CHECK(olsattn::max_abs(resid) <= 1e-8);
    }
}

TEST_CASE("whitening identity survives an ill-conditioned design") {
    // Columns with strongly graded scales: covariance condition ~1e8.
    Rng rng(404);
    Matrix x = rng.gaussian_matrix(80, 3);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        x(i, 1) *= 1e-2;
        x(i, 2) *= 1e-4;
    }
    SpectralFactor sf = olsattn::whitening_factor(olsattn::empirical_covariance(x));
    Matrix xl = matmul(x, sf.whitening);
    Matrix resid = (1.0 / 80.0) * matmul(transpose(xl), xl) - Matrix::identity(3);
    CHECK(olsattn::max_abs(resid) <= 1e-8);
}

TEST_CASE("rank gate rejects covariances below the eigenvalue-ratio tolerance") {
    CHECK_THROWS_AS(olsattn::whitening_factor(diag_from({1.0, 1e-11})), olsattn::rank_deficient_error);
    CHECK_THROWS_AS(olsattn::whitening_factor(Matrix(2, 2)), olsattn::rank_deficient_error);
    CHECK_NOTHROW(olsattn::whitening_factor(diag_from({1.0, 1e-9})));
}
