#include "dscf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dscf/kernels.hpp"

namespace dscf {

DenseMatrix gram(const DenseMatrix& x) {
    if (x.rows() == 0 || x.cols() == 0) throw BadShape("gram: empty matrix");
    // multiply_tn accumulates (i,j) and (j,i) from the same commuting
    // products, so the result is symmetric bit-for-bit.
    DenseMatrix g = multiply_tn(x, x);
    require_finite(g, "gram output");
    return g;
}

namespace {

double max_abs(const DenseMatrix& m) {
    double r = 0.0;
    for (double v : m.data()) r = std::max(r, std::fabs(v));
    return r;
}

}  // namespace

DenseMatrix solve_spd(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n)
        throw ShapeMismatch("solve_spd: A must be square, got " + shape_string(a));
    if (b.rows() != n)
        throw ShapeMismatch("solve_spd: B has " + std::to_string(b.rows()) +
                            " rows, expected " + std::to_string(n));

    const double scale = std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-10 * scale)
                throw ShapeMismatch("solve_spd: A is not symmetric within tolerance");

    // Lower Cholesky factor of (A + A^T)/2, packed row-major.
    DenseMatrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.5 * (a(i, j) + a(j, i));
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s))
                    throw NotPositiveDefinite("solve_spd: pivot " + std::to_string(i) +
                                              " is " + std::to_string(s));
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }

    // Substitution runs per fixed-width column block (parallel across
    // blocks): every X entry is accumulated by one thread in ascending-k
    // order, with contiguous row segments in the inner loops.
    const std::size_t m = b.cols();
    const DenseMatrix u = serial::transpose(l);  // upper factor for the back pass
    DenseMatrix x(n, m);
    constexpr std::size_t kBlock = 64;
    const std::size_t blocks = (m + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (n * n * m >= 32768)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t j0 = blk * kBlock;
        const std::size_t j1 = std::min(j0 + kBlock, m);
        const std::size_t w = j1 - j0;
        std::vector<double> y(n * w);
        for (std::size_t i = 0; i < n; ++i) {
            double* yrow = y.data() + i * w;
            for (std::size_t j = 0; j < w; ++j) yrow[j] = b(i, j0 + j);
            for (std::size_t k = 0; k < i; ++k) {
                const double lik = l(i, k);
                const double* yk = y.data() + k * w;
                for (std::size_t j = 0; j < w; ++j) yrow[j] -= lik * yk[j];
            }
            const double inv = l(i, i);
            for (std::size_t j = 0; j < w; ++j) yrow[j] /= inv;
        }
        for (std::size_t i = n; i-- > 0;) {
            double* yrow = y.data() + i * w;
            for (std::size_t k = i + 1; k < n; ++k) {
                const double uik = u(i, k);
                const double* yk = y.data() + k * w;
                for (std::size_t j = 0; j < w; ++j) yrow[j] -= uik * yk[j];
            }
            const double inv = u(i, i);
            for (std::size_t j = 0; j < w; ++j) {
                yrow[j] /= inv;
                x(i, j0 + j) = yrow[j];
            }
        }
    }
    require_finite(x, "solve_spd output");
    return x;
}

std::pair<DenseMatrix, DenseMatrix> pos_neg_split(const DenseMatrix& m) {
    DenseMatrix pos(m.rows(), m.cols());
    DenseMatrix neg(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m.data()[i];
        pos.data()[i] = v > 0.0 ? v : 0.0;
        neg.data()[i] = v < 0.0 ? -v : 0.0;
    }
    return {std::move(pos), std::move(neg)};
}

DenseMatrix safe_div(const DenseMatrix& numer, const DenseMatrix& denom, double eps_div) {
    if (!numer.same_shape(denom))
        throw ShapeMismatch("safe_div: " + shape_string(numer) + " vs " + shape_string(denom));
    DenseMatrix out(numer.rows(), numer.cols());
    for (std::size_t i = 0; i < numer.size(); ++i)
        out.data()[i] = numer.data()[i] / (denom.data()[i] + eps_div);
    require_finite(out, "safe_div output");
    return out;
}

double frobenius_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "frobenius_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> column_l2_norms(const DenseMatrix& m) {
    std::vector<double> sums(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sums[j] += m(i, j) * m(i, j);
    for (double& s : sums) s = std::sqrt(s);
    return sums;
}

double l21_norm(const DenseMatrix& m) {
    double total = 0.0;
    for (double c : column_l2_norms(m)) total += c;
    return total;
}

}  // namespace dscf
