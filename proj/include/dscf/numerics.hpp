#ifndef DSCF_NUMERICS_HPP
#define DSCF_NUMERICS_HPP

#include <utility>
#include <vector>

#include "dscf/matrix.hpp"

namespace dscf {

/// X^T X. Symmetric positive-semidefinite, cols x cols.
DenseMatrix gram(const DenseMatrix& x);

/// Solves A X = B for symmetric positive-definite A via Cholesky. A is
/// symmetrized as (A + A^T)/2 before factoring; inputs whose asymmetry
/// exceeds 1e-10 relative are rejected. Throws NotPositiveDefinite when a
/// pivot is <= 0, which signals the caller to raise regularization.
DenseMatrix solve_spd(const DenseMatrix& a, const DenseMatrix& b);

/// (max(M,0), max(-M,0)): both nonnegative, difference reconstructs M
/// exactly, supports disjoint. Used to keep the multiplicative ratios
/// nonnegative when a mixed-sign matrix enters an update.
std::pair<DenseMatrix, DenseMatrix> pos_neg_split(const DenseMatrix& m);

/// Entrywise numer / (denom + eps_div) for nonnegative inputs.
DenseMatrix safe_div(const DenseMatrix& numer, const DenseMatrix& denom, double eps_div);

double frobenius_norm(const DenseMatrix& m);

/// ||A - B||_F without materializing the difference.
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

/// Euclidean norm of each column.
std::vector<double> column_l2_norms(const DenseMatrix& m);

/// L2,1 norm: sum of column Euclidean norms.
double l21_norm(const DenseMatrix& m);

}  // namespace dscf

#endif  // DSCF_NUMERICS_HPP
