#ifndef DSCF_DATASET_HPP
#define DSCF_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dscf/clustering.hpp"
#include "dscf/matrix.hpp"

namespace dscf {

/// Labeled sample matrix; columns are samples, labels are compact 0-based
/// class ids with the original file ids kept for round trips.
struct Dataset {
    DenseMatrix X;              // D x N, entrywise >= 0
    ClusterAssignment labels;   // length N, ids in [0, class_count)
    int class_count = 0;
    std::vector<long long> original_ids;  // original label per compact id, ascending

    std::size_t feature_dim() const { return X.rows(); }
    std::size_t sample_count() const { return X.cols(); }
};

/// Reads "label,f0,...,f_{D-1}" rows (no header). Labels are compacted to
/// contiguous ids in ascending order of the originals.
Dataset load_dataset(const std::string& path);

/// Writes the same format with full double precision and original label ids.
void save_dataset(const Dataset& dataset, const std::string& path);

struct SynthSpec {
    int classes = 3;
    int per_class = 50;
    int dim = 50;
    double separation = 10.0;  // minimum pairwise mean distance, in units of sigma
    double sigma = 1.0;
    std::uint64_t seed = 0;
};

/// Gaussian blobs with rejection-sampled means at pairwise distance
/// >= separation * sigma, clamped to the nonnegative orthant.
Dataset generate_synthetic(const SynthSpec& spec);

}  // namespace dscf

#endif  // DSCF_DATASET_HPP
