#ifndef DSCF_CLUSTERING_HPP
#define DSCF_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "dscf/matrix.hpp"

namespace dscf {

/// Cluster ids for a sample set; labels lie in [0, k).
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;

    ClusterAssignment() = default;
    ClusterAssignment(std::vector<int> l, int k_);

    std::size_t size() const { return labels.size(); }
};

struct KMeansParams {
    int restarts = 10;
    int max_iters = 300;
    double tol = 1e-6;  // stop when no centroid moves farther than this
    std::uint64_t seed = 0;
};

/// Lloyd's algorithm, samples given as columns, k-means++ seeding,
/// best of `restarts` runs by within-cluster sum of squares.
ClusterAssignment kmeans(const DenseMatrix& points, int k, const KMeansParams& params);

/// Fraction of samples matched under the best bijection between predicted
/// and true cluster ids (maximum-weight matching on the confusion matrix).
double clustering_accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth);

/// F-measure of "same cluster" decisions over all unordered sample pairs;
/// 0 when the prediction yields no same-cluster pair.
double pairwise_fscore(const ClusterAssignment& pred, const ClusterAssignment& truth);

/// Maximum total weight of a perfect matching on a square nonnegative
/// weight matrix (assignment problem). Exposed for direct testing.
double max_weight_matching(const DenseMatrix& weights);

}  // namespace dscf

#endif  // DSCF_CLUSTERING_HPP
