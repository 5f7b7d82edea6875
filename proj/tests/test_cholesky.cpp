#include <doctest.h>

#include <cstddef>

#include "olsattn/cholesky.hpp"
#include "olsattn/matrix.hpp"
#include "olsattn/rng.hpp"
#include "oracles.hpp"

using olsattn::Matrix;
using olsattn::Rng;

namespace {

Matrix random_spd(std::size_t k, Rng& rng, double ridge = 1.0) {
    Matrix a = rng.gaussian_matrix(k, k);
    return olsattn::symmetrize(matmul(transpose(a), a) + ridge * Matrix::identity(k));
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
    Rng rng(3);
    Matrix b = rng.gaussian_matrix(4, 1);
    Matrix x = solve_spd(Matrix::identity(4), b);
    CHECK(olsattn::max_abs(x - b) <= 1e-15);
}

TEST_CASE("diagonal system solves entrywise") {
    Matrix a = Matrix::from_rows({{4, 0}, {0, 9}});
    Matrix b = Matrix::from_rows({{8}, {27}});
    Matrix x = solve_spd(a, b);
    CHECK(x(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x(1, 0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("random SPD solve meets the residual bound") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix a = random_spd(5, rng);
        Matrix b = rng.gaussian_matrix(5, 1);
        Matrix x = solve_spd(a, b);
        double resid = olsattn::frobenius_norm(matmul(a, x) - b);
        CHECK(resid <= 1e-9 * olsattn::frobenius_norm(b));
    }
}

TEST_CASE("multi-column right-hand sides solve column by column") {
    Rng rng(23);
    Matrix a = random_spd(4, rng);
    Matrix b = rng.gaussian_matrix(4, 3);
    Matrix x = solve_spd(a, b);
    CHECK(x.cols() == 3);
    CHECK(olsattn::frobenius_norm(matmul(a, x) - b) <= 1e-9 * olsattn::frobenius_norm(b));
}

TEST_CASE("lower factor reconstructs the input") {
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a = random_spd(6, rng);
        Matrix r = olsattn::cholesky_lower(a);
        CHECK(olsattn::max_abs(matmul(r, transpose(r)) - a) <= 1e-10 * olsattn::max_abs(a));
        for (std::size_t i = 0; i < r.rows(); ++i) {
            for (std::size_t j = i + 1; j < r.cols(); ++j) CHECK(r(i, j) == 0.0);
        }
    }
}

TEST_CASE("factor agrees with solving against a Gauss-Jordan inverse") {
    Rng rng(31);
    Matrix a = random_spd(5, rng);
    Matrix b = rng.gaussian_matrix(5, 1);
    Matrix x = solve_spd(a, b);
    Matrix x_oracle = oracles::naive_matmul(oracles::gauss_jordan_inverse(a), b);
    CHECK(olsattn::max_abs(x - x_oracle) <= 1e-9 * olsattn::max_abs(x_oracle));
}

TEST_CASE("indefinite input is rejected") {
    Matrix indefinite = Matrix::from_rows({{1, 2}, {2, 1}});
    CHECK_THROWS_AS(olsattn::cholesky_lower(indefinite), olsattn::numerical_error);
    CHECK_THROWS_AS(solve_spd(indefinite, Matrix(2, 1)), olsattn::numerical_error);
}

TEST_CASE("pivot gate flags near-singular systems as rank deficient") {
    Matrix nearly = Matrix::from_rows({{1.0, 0.0}, {0.0, 1e-14}});
    CHECK_THROWS_AS(olsattn::cholesky_lower(nearly, 1e-10), olsattn::rank_deficient_error);
    CHECK_NOTHROW(olsattn::cholesky_lower(nearly));
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(solve_spd(Matrix(2, 3), Matrix(2, 1)), olsattn::dimension_error);
    CHECK_THROWS_AS(solve_spd(Matrix::identity(2), Matrix(3, 1)), olsattn::dimension_error);
}
