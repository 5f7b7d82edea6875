#ifndef OLSATTN_ERRORS_HPP
#define OLSATTN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace olsattn {

/// Shape contract violation (incompatible or invalid dimensions).
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-SPD pivot, eigensolver non-convergence, divergence.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Design matrix (or covariance) fails the full-column-rank gate.
struct rank_deficient_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace olsattn

#endif
