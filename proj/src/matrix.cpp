#include "dscf/matrix.hpp"

#include <cmath>

namespace dscf {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw ShapeMismatch("ragged row list in DenseMatrix initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool all_finite(const DenseMatrix& m) {
    for (double v : m.data())
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(const DenseMatrix& m, const char* what) {
    if (!all_finite(m))
        throw Diverged(std::string(what) + " contains a non-finite entry");
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeMismatch(std::string(op) + ": shapes " + shape_string(a) + " vs " +
                            shape_string(b));
}

std::string shape_string(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace dscf
