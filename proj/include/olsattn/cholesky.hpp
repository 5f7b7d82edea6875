#ifndef OLSATTN_CHOLESKY_HPP
#define OLSATTN_CHOLESKY_HPP

#include "olsattn/matrix.hpp"

namespace olsattn {

/// Lower Cholesky factor R with R Rt = a.
///
/// Throws numerical_error on a non-positive pivot (input not SPD). When
/// pivot_rel_tol > 0, a pivot at or below pivot_rel_tol * max(diag(a))
/// throws rank_deficient_error instead: this is the full-rank gate used by
/// the normal-equations solver.
Matrix cholesky_lower(const Matrix& a, double pivot_rel_tol = 0.0);

/// Solves a x = b for SPD a via Cholesky; b may have several columns.
Matrix solve_spd(const Matrix& a, const Matrix& b, double pivot_rel_tol = 0.0);

}  // namespace olsattn

#endif
