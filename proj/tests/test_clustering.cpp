#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "dscf/clustering.hpp"
#include "dscf/errors.hpp"
#include "dscf/rng.hpp"
#include "helpers.hpp"

using namespace dscf;
using dscf::testing::random_matrix;

namespace {

// Exhaustive-permutation accuracy: maximum match count over every bijection
// of predicted ids onto true ids.
double brute_accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth) {
    int k = std::max(pred.k, truth.k);
    for (int v : pred.labels) k = std::max(k, v + 1);
    for (int v : truth.labels) k = std::max(k, v + 1);

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    int best = 0;
    do {
        int matched = 0;
        for (std::size_t j = 0; j < pred.size(); ++j)
            if (perm[static_cast<std::size_t>(pred.labels[j])] == truth.labels[j]) ++matched;
        best = std::max(best, matched);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

// Pair-enumeration F-score over all unordered sample pairs.
double brute_fscore(const ClusterAssignment& pred, const ClusterAssignment& truth) {
    long long tp = 0, pred_same = 0, true_same = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (std::size_t j = i + 1; j < pred.size(); ++j) {
            const bool p = pred.labels[i] == pred.labels[j];
            const bool t = truth.labels[i] == truth.labels[j];
            pred_same += p;
            true_same += t;
            tp += p && t;
        }
    if (pred_same == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(pred_same);
    const double recall =
        true_same > 0 ? static_cast<double>(tp) / static_cast<double>(true_same) : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

ClusterAssignment random_assignment(Rng& rng, std::size_t n, int k) {
    std::vector<int> labels(n);
    for (int& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    return ClusterAssignment(std::move(labels), k);
}

// Sum of squared distances to per-cluster means, the tightest WCSS the
// labeling admits.
double recomputed_wcss(const DenseMatrix& pts, const ClusterAssignment& a) {
    const std::size_t d = pts.rows();
    DenseMatrix means(static_cast<std::size_t>(a.k), d);
    std::vector<std::size_t> counts(static_cast<std::size_t>(a.k), 0);
    for (std::size_t j = 0; j < pts.cols(); ++j) {
        const auto c = static_cast<std::size_t>(a.labels[j]);
        ++counts[c];
        for (std::size_t i = 0; i < d; ++i) means(c, i) += pts(i, j);
    }
    for (std::size_t c = 0; c < means.rows(); ++c)
        for (std::size_t i = 0; i < d; ++i)
            if (counts[c] > 0) means(c, i) /= static_cast<double>(counts[c]);
    double wcss = 0.0;
    for (std::size_t j = 0; j < pts.cols(); ++j) {
        const auto c = static_cast<std::size_t>(a.labels[j]);
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = pts(i, j) - means(c, i);
            wcss += diff * diff;
        }
    }
    return wcss;
}

}  // namespace

TEST_CASE("ClusterAssignment validates labels against k") {
    CHECK_NOTHROW(ClusterAssignment({0, 1, 0}, 2));
    CHECK_THROWS_AS(ClusterAssignment({0, 2}, 2), BadShape);
    CHECK_THROWS_AS(ClusterAssignment({-1, 0}, 2), BadShape);
}

TEST_CASE("kmeans degenerate cluster counts") {
    Rng rng(3);
    const DenseMatrix pts = random_matrix(rng, 2, 7);

    const ClusterAssignment one = kmeans(pts, 1, KMeansParams{});
    CHECK(one.k == 1);
    for (int l : one.labels) CHECK(l == 0);

    const ClusterAssignment each = kmeans(pts, 7, KMeansParams{});
    std::set<int> distinct(each.labels.begin(), each.labels.end());
    CHECK(distinct.size() == 7);
    CHECK(recomputed_wcss(pts, each) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kmeans separates well-spaced blobs exactly") {
    Rng rng(5);
    // Two 2-D blobs, intra-spread 0.1, centers 10 apart.
    DenseMatrix pts(2, 20);
    for (std::size_t j = 0; j < 10; ++j) {
        pts(0, j) = 0.1 * rng.normal();
        pts(1, j) = 0.1 * rng.normal();
        pts(0, 10 + j) = 10.0 + 0.1 * rng.normal();
        pts(1, 10 + j) = 10.0 + 0.1 * rng.normal();
    }
    KMeansParams p;
    p.seed = 1;
    const ClusterAssignment got = kmeans(pts, 2, p);

    // Exhaustive pairwise check: same blob iff same label.
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = i + 1; j < 20; ++j) {
            const bool same_blob = (i < 10) == (j < 10);
            CHECK((got.labels[i] == got.labels[j]) == same_blob);
        }
}

TEST_CASE("kmeans is deterministic and restart selection never hurts") {
    Rng rng(7);
    const DenseMatrix pts = random_matrix(rng, 3, 40);

    KMeansParams p;
    p.seed = 9;
    const ClusterAssignment a = kmeans(pts, 4, p);
    const ClusterAssignment b = kmeans(pts, 4, p);
    CHECK(a.labels == b.labels);

    // With a shared seed the multi-restart run starts by replaying the
    // single-restart run, so its winner can only be as good or better.
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        KMeansParams one;
        one.restarts = 1;
        one.seed = seed;
        KMeansParams many = one;
        many.restarts = 10;
        const double w_one = recomputed_wcss(pts, kmeans(pts, 4, one));
        const double w_many = recomputed_wcss(pts, kmeans(pts, 4, many));
        CHECK(w_many <= w_one + 1e-6 * (1.0 + w_one));
    }
    CHECK_THROWS_AS(kmeans(pts, 2, KMeansParams{0, 300, 1e-6, 1}), Error);
}

TEST_CASE("kmeans input validation") {
    Rng rng(11);
    const DenseMatrix pts = random_matrix(rng, 2, 4);
    CHECK_THROWS_AS(kmeans(DenseMatrix(), 1, KMeansParams{}), EmptyInput);
    CHECK_THROWS_AS(kmeans(pts, 5, KMeansParams{}), BadShape);
    CHECK_THROWS_AS(kmeans(pts, 0, KMeansParams{}), BadShape);
}

TEST_CASE("max_weight_matching on hand instances") {
    CHECK(max_weight_matching(DenseMatrix{{1, 5}, {2, 3}}) == doctest::Approx(7.0));
    CHECK(max_weight_matching(DenseMatrix{{4}}) == doctest::Approx(4.0));
    // Diagonal is optimal here.
    CHECK(max_weight_matching(DenseMatrix{{9, 1, 1}, {1, 9, 1}, {1, 1, 9}}) ==
          doctest::Approx(27.0));
    // Forcing an off-diagonal assignment.
    CHECK(max_weight_matching(DenseMatrix{{0, 10, 0}, {10, 0, 0}, {0, 0, 1}}) ==
          doctest::Approx(21.0));
    CHECK_THROWS_AS(max_weight_matching(DenseMatrix(2, 3)), ShapeMismatch);
}

TEST_CASE("clustering_accuracy on hand instances") {
    const ClusterAssignment truth({0, 0, 1, 1}, 2);
    CHECK(clustering_accuracy(truth, truth) == 1.0);

    const ClusterAssignment renamed({1, 1, 0, 0}, 2);
    CHECK(clustering_accuracy(renamed, truth) == 1.0);

    const ClusterAssignment off({0, 1, 1, 1}, 2);
    CHECK(clustering_accuracy(off, truth) == 0.75);

    CHECK_THROWS_AS(clustering_accuracy(ClusterAssignment({0, 1}, 2), truth), LengthMismatch);
}

TEST_CASE("clustering_accuracy equals the exhaustive-permutation oracle") {
    Rng rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        const int k = 2 + static_cast<int>(rng.below(3));  // up to 4 for speed
        const std::size_t n =
            static_cast<std::size_t>(k) + 1 + static_cast<std::size_t>(rng.below(7));
        const ClusterAssignment pred = random_assignment(rng, n, k);
        const ClusterAssignment truth = random_assignment(rng, n, k);
        CHECK(clustering_accuracy(pred, truth) == brute_accuracy(pred, truth));
    }
}

TEST_CASE("clustering_accuracy is invariant under predicted-label permutations") {
    Rng rng(17);
    const ClusterAssignment truth = random_assignment(rng, 15, 3);
    const ClusterAssignment pred = random_assignment(rng, 15, 3);
    const double base = clustering_accuracy(pred, truth);

    std::vector<int> perm = {2, 0, 1};
    std::vector<int> relabeled(pred.labels.size());
    for (std::size_t j = 0; j < pred.labels.size(); ++j)
        relabeled[j] = perm[static_cast<std::size_t>(pred.labels[j])];
    CHECK(clustering_accuracy(ClusterAssignment(relabeled, 3), truth) == base);
}

TEST_CASE("pairwise_fscore on hand instances") {
    const ClusterAssignment truth({0, 0, 1, 1}, 2);
    CHECK(pairwise_fscore(truth, truth) == 1.0);

    // One predicted cluster over two true pairs: P = 2/6, R = 1, F = 0.5.
    const ClusterAssignment lumped({0, 0, 0, 0}, 1);
    CHECK(pairwise_fscore(lumped, truth) == doctest::Approx(0.5).epsilon(1e-15));

    // All singletons: no predicted-same pair, convention F = 0.
    const ClusterAssignment singletons({0, 1, 2, 3}, 4);
    CHECK(pairwise_fscore(singletons, truth) == 0.0);

    CHECK_THROWS_AS(pairwise_fscore(ClusterAssignment({0}, 1), ClusterAssignment({0}, 1)),
                    EmptyInput);
    CHECK_THROWS_AS(pairwise_fscore(ClusterAssignment({0, 1}, 2), truth), LengthMismatch);
}

TEST_CASE("pairwise_fscore equals the pair-enumeration oracle") {
    Rng rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        const int k = 2 + static_cast<int>(rng.below(4));
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(19));  // up to 20
        const ClusterAssignment pred = random_assignment(rng, n, k);
        const ClusterAssignment truth = random_assignment(rng, n, k);
        CHECK(pairwise_fscore(pred, truth) ==
              doctest::Approx(brute_fscore(pred, truth)).epsilon(1e-12));
    }
}
