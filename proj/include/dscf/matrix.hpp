#ifndef DSCF_MATRIX_HPP
#define DSCF_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "dscf/errors.hpp"

namespace dscf {

/// Dense real matrix, row-major flat storage. The single carrier type for
/// data, factors, similarity and error matrices throughout the library.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Row-list constructor, mainly for tests: {{1,2},{3,4}}.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Positive diagonal weights for the reweighted column-sparsity surrogate
/// (the algorithm's diagonal matrix with d_ii = 1/(2||e_i||)).
struct DiagWeights {
    std::vector<double> diagonal;

    DiagWeights() = default;
    explicit DiagWeights(std::vector<double> d) : diagonal(std::move(d)) {}

    static DiagWeights identity(std::size_t n) {
        return DiagWeights(std::vector<double>(n, 1.0));
    }

    std::size_t size() const { return diagonal.size(); }
    double operator[](std::size_t i) const { return diagonal[i]; }
};

/// True iff every entry is finite.
bool all_finite(const DenseMatrix& m);

/// Throws Diverged naming `what` when `m` contains a NaN or Inf.
void require_finite(const DenseMatrix& m, const char* what);

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op);

std::string shape_string(const DenseMatrix& m);

}  // namespace dscf

#endif  // DSCF_MATRIX_HPP
