#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dscf/kernels.hpp"
#include "dscf/rng.hpp"
#include "helpers.hpp"

using namespace dscf;
using dscf::testing::random_matrix;

namespace {

// Independent dot-form oracle; accumulates each entry in ascending-k order,
// the order both kernel families promise.
DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.cols() == b.rows());
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

DenseMatrix naive_transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

struct Shape3 {
    std::size_t m, k, n;
};

// Includes shapes beyond the parallel cutoff so both code paths run.
const std::vector<Shape3> kShapes = {
    {1, 1, 1}, {2, 3, 2}, {5, 4, 6}, {17, 9, 3}, {3, 31, 24}, {40, 50, 30}, {64, 64, 64}};

}  // namespace

TEST_CASE("multiply matches hand values") {
    const DenseMatrix a = {{1, 2, 3}, {4, 5, 6}};
    const DenseMatrix b = {{7, 8}, {9, 10}, {11, 12}};
    const DenseMatrix expect = {{58, 64}, {139, 154}};
    CHECK(multiply(a, b) == expect);
    CHECK(serial::multiply(a, b) == expect);
}

TEST_CASE("multiply family agrees bit-for-bit with the oracle and the serial reference") {
    Rng rng(17);
    for (const Shape3& s : kShapes) {
        CAPTURE(s.m);
        CAPTURE(s.k);
        CAPTURE(s.n);
        const DenseMatrix a = random_matrix(rng, s.m, s.k);
        const DenseMatrix b = random_matrix(rng, s.k, s.n);

        const DenseMatrix ab = multiply(a, b);
        CHECK(ab == naive_multiply(a, b));
        CHECK(ab == serial::multiply(a, b));

        const DenseMatrix at = naive_transpose(a);
        const DenseMatrix tn = multiply_tn(at, b);  // at^T = a
        CHECK(tn == ab);
        CHECK(tn == serial::multiply_tn(at, b));

        const DenseMatrix bt = naive_transpose(b);
        const DenseMatrix nt = multiply_nt(a, bt);  // bt^T = b
        CHECK(nt == ab);
        CHECK(nt == serial::multiply_nt(a, bt));
    }
}

TEST_CASE("multiply with an empty inner dimension yields zeros") {
    const DenseMatrix a(3, 0);
    const DenseMatrix b(0, 2);
    const DenseMatrix c = multiply(a, b);
    CHECK(c.rows() == 3);
    CHECK(c.cols() == 2);
    for (double v : c.data()) CHECK(v == 0.0);
}

TEST_CASE("multiply family rejects non-conformable shapes") {
    const DenseMatrix a(2, 3);
    const DenseMatrix b(2, 3);
    CHECK_THROWS_AS(multiply(a, b), ShapeMismatch);
    CHECK_THROWS_AS(multiply_tn(a, DenseMatrix(3, 2)), ShapeMismatch);
    CHECK_THROWS_AS(multiply_nt(a, DenseMatrix(3, 2)), ShapeMismatch);
    CHECK_THROWS_AS(serial::multiply(a, b), ShapeMismatch);
}

TEST_CASE("transpose is an involution and matches the oracle") {
    Rng rng(5);
    const DenseMatrix a = random_matrix(rng, 7, 13);
    const DenseMatrix t = transpose(a);
    CHECK(t == naive_transpose(a));
    CHECK(t == serial::transpose(a));
    CHECK(transpose(t) == a);
}

TEST_CASE("elementwise kernels match hand values") {
    const DenseMatrix a = {{1, -2}, {3, 4}};
    const DenseMatrix b = {{5, 6}, {-7, 8}};
    CHECK(add(a, b) == DenseMatrix{{6, 4}, {-4, 12}});
    CHECK(subtract(a, b) == DenseMatrix{{-4, -8}, {10, -4}});
    CHECK(scale(a, 2.0) == DenseMatrix{{2, -4}, {6, 8}});
    CHECK(hadamard(a, b) == DenseMatrix{{5, -12}, {-21, 32}});
}

TEST_CASE("elementwise kernels agree bit-for-bit with the serial reference") {
    Rng rng(23);
    // 150 x 150 = 22500 entries clears the elementwise parallel cutoff.
    for (std::size_t n : {3UL, 150UL}) {
        const DenseMatrix a = random_matrix(rng, n, n);
        const DenseMatrix b = random_matrix(rng, n, n);
        CHECK(add(a, b) == serial::add(a, b));
        CHECK(subtract(a, b) == serial::subtract(a, b));
        CHECK(scale(a, 0.37) == serial::scale(a, 0.37));
        CHECK(hadamard(a, b) == serial::hadamard(a, b));
    }
}

TEST_CASE("elementwise kernels reject shape mismatches") {
    const DenseMatrix a(2, 2);
    const DenseMatrix b(2, 3);
    CHECK_THROWS_AS(add(a, b), ShapeMismatch);
    CHECK_THROWS_AS(subtract(a, b), ShapeMismatch);
    CHECK_THROWS_AS(hadamard(a, b), ShapeMismatch);
}

TEST_CASE("kernels are pure: repeated calls give identical bits") {
    Rng rng(99);
    const DenseMatrix a = random_matrix(rng, 12, 20);
    const DenseMatrix b = random_matrix(rng, 20, 9);
    CHECK(multiply(a, b) == multiply(a, b));
    CHECK(multiply_nt(a, transpose(b)) == multiply_nt(a, transpose(b)));
}
