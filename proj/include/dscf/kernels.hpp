#ifndef DSCF_KERNELS_HPP
#define DSCF_KERNELS_HPP

#include "dscf/matrix.hpp"

namespace dscf {

// Dense kernels, OpenMP-parallel over output rows above a size cutoff.
// Each output entry is accumulated by exactly one thread in ascending-k
// order, so results are bit-identical to the serial reference regardless
// of thread count. Reductions that would need a parallel sum (norms, dot
// products) stay serial for the same reason.

/// C = A * B.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// C = A^T * B.
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);

/// C = A * B^T.
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);

/// Entrywise product.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

namespace serial {

// Plain triple-loop reference implementations, kept for testing and for the
// kernel benchmark. Accumulation order matches the parallel kernels, so the
// equivalence tests may compare bit-for-bit.

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace serial

}  // namespace dscf

#endif  // DSCF_KERNELS_HPP
