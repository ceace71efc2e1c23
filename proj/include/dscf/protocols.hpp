#ifndef DSCF_PROTOCOLS_HPP
#define DSCF_PROTOCOLS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dscf/baselines.hpp"
#include "dscf/clustering.hpp"
#include "dscf/dataset.hpp"
#include "dscf/model.hpp"

namespace dscf {

enum class Method { dscf, cf, cascade };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// A trainable method plus its hyperparameters. The model config provides
/// the layer depth and weights; the CF config provides iteration settings
/// for the single-layer and cascaded baselines. Protocol drivers override
/// every rank with K+1 before each trial.
struct MethodSpec {
    Method method = Method::dscf;
    ModelConfig model;
    CfConfig cf;
};

/// Copy of `spec` with every rank (layer widths, CF rank) set to r.
MethodSpec with_rank(MethodSpec spec, std::size_t r);

struct TrialMetrics {
    std::uint64_t seed = 0;  // the trial's derived seed, enough to re-run it
    double ac = 0.0;
    double fscore = 0.0;
};

struct MetricReport {
    double ac_mean = 0.0, ac_std = 0.0;
    double f_mean = 0.0, f_std = 0.0;
    std::vector<TrialMetrics> runs;
};

/// Means and population standard deviations over the runs.
MetricReport aggregate(std::vector<TrialMetrics> runs);

struct NoiseSpec {
    std::vector<double> variance_levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    double pixel_fraction = 0.3;
    std::uint64_t seed = 0;
};

/// Adds seeded Gaussian noise with variance level * (max entry)^2 to a
/// random pixel_fraction of the entries, clamping the result to >= 0.
DenseMatrix corrupt_gaussian(const DenseMatrix& x, const NoiseSpec& spec, double level);

struct CorruptionDetail {
    DenseMatrix corrupted;            // clamped, what corrupt_gaussian returns
    DenseMatrix unclamped;            // pre-clamp values, for statistical checks
    std::vector<std::size_t> indices; // corrupted flat positions, ascending
};

CorruptionDetail corrupt_gaussian_detail(const DenseMatrix& x, const NoiseSpec& spec,
                                         double level);

/// All samples of K uniformly chosen distinct classes, original column
/// order, truth relabeled to 0..K-1 (ascending in the original ids).
std::pair<DenseMatrix, ClusterAssignment> sample_categories(const Dataset& dataset, int k,
                                                            std::uint64_t trial_seed);

/// Trains the method on X and k-means-clusters the columns of its final
/// representation. Returns (accuracy, pairwise F-score).
std::pair<double, double> run_clustering_trial(const DenseMatrix& x,
                                               const ClusterAssignment& truth,
                                               const MethodSpec& spec,
                                               const KMeansParams& kmeans_params);

struct KReport {
    int k = 0;
    MetricReport report;
};

struct ProtocolResult {
    Method method = Method::dscf;
    std::vector<KReport> by_k;
};

/// For each K and method: `trials` independent category samples, each
/// trained (rank K+1) and scored. Trials derive their seeds from
/// (master_seed, K, trial) and may run in parallel.
std::vector<ProtocolResult> run_protocol(const Dataset& dataset, const std::vector<int>& ks,
                                         int trials, const std::vector<MethodSpec>& methods,
                                         const KMeansParams& kmeans_params,
                                         std::uint64_t master_seed);

struct NoiseSweepRow {
    double level = 0.0;
    MetricReport report;
};

/// Corruption-level sweep. Category samples, training seeds and the noise
/// mask are shared across levels, so rows are pairwise comparable.
std::vector<NoiseSweepRow> noise_sweep(const Dataset& dataset, const NoiseSpec& noise, int k,
                                       int trials, const MethodSpec& method,
                                       const KMeansParams& kmeans_params,
                                       std::uint64_t master_seed);

struct LayerSweepRow {
    std::size_t layers = 0;
    MetricReport report;
};

/// Depth sweep at fixed K; every depth sees the identical sampled X.
std::vector<LayerSweepRow> layer_sweep(const Dataset& dataset,
                                       const std::vector<std::size_t>& layer_counts, int k,
                                       int trials, const ModelConfig& base,
                                       const KMeansParams& kmeans_params,
                                       std::uint64_t master_seed);

struct GridPoint {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double ac_mean = 0.0;
};

struct GridResult {
    ModelConfig best;
    double best_ac = 0.0;
    std::vector<GridPoint> surface;  // alpha-major, then beta, then gamma
};

/// Exhaustive (alpha, beta, gamma) search at K = 2; ties keep the earliest
/// grid point in surface order.
GridResult grid_search(const Dataset& dataset, const std::vector<double>& alphas,
                       const std::vector<double>& betas, const std::vector<double>& gammas,
                       int trials, const ModelConfig& base, const KMeansParams& kmeans_params,
                       std::uint64_t master_seed);

}  // namespace dscf

#endif  // DSCF_PROTOCOLS_HPP
