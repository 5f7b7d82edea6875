#ifndef OLSATTN_RNG_HPP
#define OLSATTN_RNG_HPP

#include <cstdint>

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Deterministic seeded generator (splitmix64 core, Box-Muller Gaussians).
/// Identical seeds give identical sequences on every run. Single-owner
/// mutable state: never share one instance across threads; give each
/// parallel trial its own seeded Rng.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal.
    double gaussian();
    double gaussian(double mean, double stddev);

    /// Integer uniform in [lo, hi] inclusive.
    std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi);

    Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi);
    Matrix gaussian_matrix(std::size_t rows, std::size_t cols);

    /// Derives an independent stream seed, e.g. one per trial.
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace olsattn

#endif
