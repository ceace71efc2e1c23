#include "dscf/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dscf/errors.hpp"
#include "dscf/rng.hpp"

namespace dscf {

ClusterAssignment::ClusterAssignment(std::vector<int> l, int k_) : labels(std::move(l)), k(k_) {
    if (k < 0) throw BadShape("ClusterAssignment: negative cluster count");
    for (int v : labels)
        if (v < 0 || v >= k) throw BadShape("ClusterAssignment: label outside [0, k)");
}

namespace {

double sq_dist_col(const DenseMatrix& pts, std::size_t col, const DenseMatrix& centers,
                   std::size_t c) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        const double d = pts(i, col) - centers(c, i);
        s += d * d;
    }
    return s;
}

struct LloydRun {
    std::vector<int> labels;
    double wcss = std::numeric_limits<double>::infinity();
};

LloydRun lloyd_once(const DenseMatrix& pts, int k, const KMeansParams& p, Rng& rng) {
    const std::size_t d = pts.rows();
    const std::size_t n = pts.cols();
    const std::size_t kk = static_cast<std::size_t>(k);

    DenseMatrix centers(kk, d);
    // k-means++ seeding: first center uniform, then distance-squared weighted.
    std::size_t first = rng.below(n);
    for (std::size_t i = 0; i < d; ++i) centers(0, i) = pts(i, first);
    std::vector<double> d2(n);
    for (std::size_t j = 0; j < n; ++j) d2[j] = sq_dist_col(pts, j, centers, 0);
    for (std::size_t c = 1; c < kk; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick;
        if (total > 0.0) {
            const double threshold = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t j = 0; j < n; ++j) {
                acc += d2[j];
                if (acc > threshold) {
                    pick = j;
                    break;
                }
            }
        } else {
            pick = rng.below(n);  // all points coincide with chosen centers
        }
        for (std::size_t i = 0; i < d; ++i) centers(c, i) = pts(i, pick);
        for (std::size_t j = 0; j < n; ++j)
            d2[j] = std::min(d2[j], sq_dist_col(pts, j, centers, c));
    }

    std::vector<int> labels(n, 0);
    std::vector<double> best_d(n, 0.0);
    for (int iter = 0; iter < p.max_iters; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            int arg = 0;
            double best = sq_dist_col(pts, j, centers, 0);
            for (std::size_t c = 1; c < kk; ++c) {
                const double v = sq_dist_col(pts, j, centers, c);
                if (v < best) {
                    best = v;
                    arg = static_cast<int>(c);
                }
            }
            labels[j] = arg;
            best_d[j] = best;
        }

        DenseMatrix sums(kk, d);
        std::vector<std::size_t> counts(kk, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = static_cast<std::size_t>(labels[j]);
            ++counts[c];
            for (std::size_t i = 0; i < d; ++i) sums(c, i) += pts(i, j);
        }
        // Re-seed any emptied cluster at the point farthest from its center.
        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (counts[static_cast<std::size_t>(labels[j])] <= 1) continue;
                if (best_d[j] > far_d) {
                    far_d = best_d[j];
                    far = j;
                }
            }
            const auto old = static_cast<std::size_t>(labels[far]);
            --counts[old];
            for (std::size_t i = 0; i < d; ++i) sums(old, i) -= pts(i, far);
            labels[far] = static_cast<int>(c);
            best_d[far] = 0.0;
            counts[c] = 1;
            for (std::size_t i = 0; i < d; ++i) sums(c, i) = pts(i, far);
        }

        double movement = 0.0;
        for (std::size_t c = 0; c < kk; ++c) {
            double m2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double nc = sums(c, i) / static_cast<double>(counts[c]);
                const double diff = nc - centers(c, i);
                m2 += diff * diff;
                centers(c, i) = nc;
            }
            movement = std::max(movement, std::sqrt(m2));
        }
        if (movement <= p.tol) break;
    }

    LloydRun out;
    out.labels.resize(n);
    out.wcss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        int arg = 0;
        double best = sq_dist_col(pts, j, centers, 0);
        for (std::size_t c = 1; c < kk; ++c) {
            const double v = sq_dist_col(pts, j, centers, c);
            if (v < best) {
                best = v;
                arg = static_cast<int>(c);
            }
        }
        out.labels[j] = arg;
        out.wcss += best;
    }
    return out;
}

long long choose2(long long m) { return m * (m - 1) / 2; }

DenseMatrix contingency(const ClusterAssignment& pred, const ClusterAssignment& truth,
                        std::size_t k) {
    DenseMatrix c(k, k, 0.0);
    for (std::size_t j = 0; j < pred.size(); ++j)
        c(static_cast<std::size_t>(pred.labels[j]), static_cast<std::size_t>(truth.labels[j])) +=
            1.0;
    return c;
}

std::size_t common_k(const ClusterAssignment& pred, const ClusterAssignment& truth,
                     const char* op) {
    if (pred.size() != truth.size())
        throw LengthMismatch(std::string(op) + ": assignment lengths differ");
    int k = std::max(pred.k, truth.k);
    for (int v : pred.labels) k = std::max(k, v + 1);
    for (int v : truth.labels) k = std::max(k, v + 1);
    for (int v : pred.labels)
        if (v < 0) throw BadShape(std::string(op) + ": negative label");
    for (int v : truth.labels)
        if (v < 0) throw BadShape(std::string(op) + ": negative label");
    return static_cast<std::size_t>(k);
}

}  // namespace

ClusterAssignment kmeans(const DenseMatrix& points, int k, const KMeansParams& params) {
    if (points.empty()) throw EmptyInput("kmeans: no points");
    if (k < 1) throw BadShape("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(k) > points.cols())
        throw BadShape("kmeans: k exceeds sample count");
    if (params.restarts < 1) throw Error("kmeans: restarts must be >= 1");
    if (params.max_iters < 0) throw Error("kmeans: max_iters must be >= 0");
    require_finite(points, "kmeans input");

    Rng rng(params.seed);
    LloydRun best;
    for (int r = 0; r < params.restarts; ++r) {
        LloydRun run = lloyd_once(points, k, params, rng);
        if (run.wcss < best.wcss) best = std::move(run);
    }
    return ClusterAssignment(std::move(best.labels), k);
}

double max_weight_matching(const DenseMatrix& weights) {
    if (weights.rows() != weights.cols()) throw ShapeMismatch("matching needs a square matrix");
    const std::size_t n = weights.rows();
    if (n == 0) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();

    // Potentials-based assignment on negated weights (cost minimization).
    auto cost = [&](std::size_t i, std::size_t j) { return -weights(i - 1, j - 1); };
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += weights(p[j] - 1, j - 1);
    return total;
}

double clustering_accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth) {
    const std::size_t k = common_k(pred, truth, "clustering_accuracy");
    if (pred.size() == 0) throw EmptyInput("clustering_accuracy: empty assignments");
    const double matched = max_weight_matching(contingency(pred, truth, k));
    return matched / static_cast<double>(pred.size());
}

double pairwise_fscore(const ClusterAssignment& pred, const ClusterAssignment& truth) {
    const std::size_t k = common_k(pred, truth, "pairwise_fscore");
    if (pred.size() < 2) throw EmptyInput("pairwise_fscore: needs at least two samples");

    const DenseMatrix c = contingency(pred, truth, k);
    long long tp = 0, pred_same = 0, true_same = 0;
    for (std::size_t a = 0; a < k; ++a) {
        long long row = 0;
        for (std::size_t b = 0; b < k; ++b) {
            const auto cell = static_cast<long long>(c(a, b));
            tp += choose2(cell);
            row += cell;
        }
        pred_same += choose2(row);
    }
    for (std::size_t b = 0; b < k; ++b) {
        long long col = 0;
        for (std::size_t a = 0; a < k; ++a) col += static_cast<long long>(c(a, b));
        true_same += choose2(col);
    }

    if (pred_same == 0) return 0.0;  // degenerate: no same-cluster prediction
    const double precision = static_cast<double>(tp) / static_cast<double>(pred_same);
    const double recall =
        true_same > 0 ? static_cast<double>(tp) / static_cast<double>(true_same) : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace dscf
