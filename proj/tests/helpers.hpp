#ifndef DSCF_TESTS_HELPERS_HPP
#define DSCF_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "dscf/matrix.hpp"
#include "dscf/rng.hpp"

namespace dscf::testing {

/// Mixed-sign random matrix with entries uniform on [lo, hi).
inline DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                 double lo = -1.0, double hi = 1.0) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = lo + (hi - lo) * rng.uniform();
    return m;
}

inline DenseMatrix random_nonneg(Rng& rng, std::size_t rows, std::size_t cols,
                                 double hi = 1.0) {
    return random_matrix(rng, rows, cols, 0.0, hi);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

inline double min_entry(const DenseMatrix& m) {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : m.data()) lo = std::min(lo, v);
    return lo;
}

inline double max_entry(const DenseMatrix& m) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : m.data()) hi = std::max(hi, v);
    return hi;
}

inline double trace_of(const DenseMatrix& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
    return t;
}

}  // namespace dscf::testing

#endif  // DSCF_TESTS_HELPERS_HPP
