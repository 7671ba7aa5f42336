#ifndef GENCUR_TRIDIAGONAL_HPP
#define GENCUR_TRIDIAGONAL_HPP

#include <cstddef>
#include <vector>

#include "gencur/grid.hpp"

namespace gencur {

/**
 * Direct solvers for the complex tridiagonal systems produced by the compact
 * 1D stencils: per-row diagonal, one constant off-diagonal value on both
 * sides. The cyclic variant adds the periodic corner entries
 * A[0][n-1] = A[n-1][0] = off and removes them with a Sherman-Morrison
 * rank-1 correction on top of the same Thomas sweep.
 *
 * No pivoting: a vanishing pivot raises SolverBreakdown with the row (it is
 * reported, never regularized away). If min_abs_pivot is non-null it receives
 * the smallest pivot magnitude encountered, a cheap conditioning diagnostic.
 */

std::vector<complexd> solve_tridiagonal(const std::vector<complexd>& diag,
                                        complexd off,
                                        const std::vector<complexd>& rhs,
                                        double* min_abs_pivot = nullptr);

std::vector<complexd> solve_cyclic_tridiagonal(const std::vector<complexd>& diag,
                                               complexd off,
                                               const std::vector<complexd>& rhs,
                                               double* min_abs_pivot = nullptr);

// rhs-side helper: y = T f for the same matrix shape (corner entries included
// when cyclic). Dirichlet multiplication treats out-of-range neighbors as 0.
std::vector<complexd> tridiagonal_multiply(const std::vector<complexd>& diag,
                                           complexd off,
                                           const std::vector<complexd>& f,
                                           bool cyclic);

} // namespace gencur

#endif
