#include "dscf/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "dscf/rng.hpp"

namespace dscf {

namespace {

void validate_noise(const NoiseSpec& spec) {
    if (spec.variance_levels.empty()) throw Error("noise spec: no variance levels");
    double prev = -1.0;
    for (double l : spec.variance_levels) {
        if (!(l >= 0.0 && l <= 1.0)) throw Error("noise spec: level outside [0, 1]");
        if (l < prev) throw Error("noise spec: levels must be sorted ascending");
        prev = l;
    }
    if (!(spec.pixel_fraction > 0.0 && spec.pixel_fraction <= 1.0))
        throw Error("noise spec: pixel_fraction must lie in (0, 1]");
}

// Runs `body(job)` for jobs [0, count), possibly in parallel; the first
// exception wins and is rethrown on the calling thread.
template <typename F>
void parallel_jobs(long long count, F&& body) {
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long long job = 0; job < count; ++job) {
        if (failure) continue;
        try {
            body(job);
        } catch (...) {
#pragma omp critical(dscf_protocol_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::dscf: return "dscf";
        case Method::cf: return "cf";
        case Method::cascade: return "cascade";
    }
    throw Error("unknown method id");
}

Method parse_method(const std::string& name) {
    if (name == "dscf") return Method::dscf;
    if (name == "cf") return Method::cf;
    if (name == "cascade") return Method::cascade;
    throw Error("unknown method '" + name + "' (expected dscf, cf or cascade)");
}

MethodSpec with_rank(MethodSpec spec, std::size_t r) {
    std::fill(spec.model.layer_dims.begin(), spec.model.layer_dims.end(), r);
    spec.cf.rank = r;
    return spec;
}

MetricReport aggregate(std::vector<TrialMetrics> runs) {
    if (runs.empty()) throw EmptyInput("aggregate: no runs");
    std::vector<double> acs, fs;
    acs.reserve(runs.size());
    fs.reserve(runs.size());
    for (const TrialMetrics& r : runs) {
        acs.push_back(r.ac);
        fs.push_back(r.fscore);
    }
    MetricReport rep;
    rep.ac_mean = mean_of(acs);
    rep.ac_std = population_std(acs, rep.ac_mean);
    rep.f_mean = mean_of(fs);
    rep.f_std = population_std(fs, rep.f_mean);
    rep.runs = std::move(runs);
    return rep;
}

CorruptionDetail corrupt_gaussian_detail(const DenseMatrix& x, const NoiseSpec& spec,
                                         double level) {
    validate_noise(spec);
    if (!(level >= 0.0 && level <= 1.0))
        throw Error("corrupt_gaussian: level outside [0, 1]");

    CorruptionDetail out;
    out.unclamped = x;

    const std::size_t total = x.size();
    double v_max = 0.0;
    for (double v : x.data()) v_max = std::max(v_max, v);
    const double sd = std::sqrt(level) * v_max;

    auto count = static_cast<std::size_t>(
        std::llround(spec.pixel_fraction * static_cast<double>(total)));
    count = std::min(count, total);

    // Partial Fisher-Yates picks the corrupted positions; the noise draws
    // are assigned in ascending position order, so the same seed gives the
    // same mask and values at every level.
    Rng rng(spec.seed);
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    out.indices = idx;

    for (std::size_t flat : idx) out.unclamped.data()[flat] += sd * rng.normal();

    out.corrupted = out.unclamped;
    for (double& v : out.corrupted.data()) v = std::max(0.0, v);
    return out;
}

DenseMatrix corrupt_gaussian(const DenseMatrix& x, const NoiseSpec& spec, double level) {
    return corrupt_gaussian_detail(x, spec, level).corrupted;
}

std::pair<DenseMatrix, ClusterAssignment> sample_categories(const Dataset& dataset, int k,
                                                            std::uint64_t trial_seed) {
    if (k < 1) throw Error("sample_categories: K must be >= 1");
    if (dataset.class_count < k)
        throw NotEnoughClasses("sample_categories: dataset has " +
                               std::to_string(dataset.class_count) + " classes, need " +
                               std::to_string(k));

    const auto c = static_cast<std::size_t>(dataset.class_count);
    const auto kk = static_cast<std::size_t>(k);
    std::vector<int> pool(c);
    std::iota(pool.begin(), pool.end(), 0);
    Rng rng(trial_seed);
    for (std::size_t i = 0; i < kk; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(c - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(kk));
    std::sort(chosen.begin(), chosen.end());

    std::vector<int> relabel(c, -1);
    for (std::size_t i = 0; i < kk; ++i) relabel[static_cast<std::size_t>(chosen[i])] =
        static_cast<int>(i);

    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < dataset.sample_count(); ++j)
        if (relabel[static_cast<std::size_t>(dataset.labels.labels[j])] >= 0) cols.push_back(j);

    DenseMatrix x(dataset.feature_dim(), cols.size());
    std::vector<int> truth(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        truth[j] = relabel[static_cast<std::size_t>(dataset.labels.labels[cols[j]])];
        for (std::size_t i = 0; i < dataset.feature_dim(); ++i) x(i, j) = dataset.X(i, cols[j]);
    }
    return {std::move(x), ClusterAssignment(std::move(truth), k)};
}

std::pair<double, double> run_clustering_trial(const DenseMatrix& x,
                                               const ClusterAssignment& truth,
                                               const MethodSpec& spec,
                                               const KMeansParams& kmeans_params) {
    if (x.cols() != truth.size())
        throw LengthMismatch("run_clustering_trial: truth length does not match sample count");

    DenseMatrix v;
    switch (spec.method) {
        case Method::dscf: v = train(x, spec.model).V_final; break;
        case Method::cf: v = cf_train(x, spec.cf).V; break;
        case Method::cascade:
            v = cascade_cf_train(x, spec.model.layer_dims, spec.cf);
            break;
    }

    const ClusterAssignment pred = kmeans(v, truth.k, kmeans_params);
    return {clustering_accuracy(pred, truth), pairwise_fscore(pred, truth)};
}

std::vector<ProtocolResult> run_protocol(const Dataset& dataset, const std::vector<int>& ks,
                                         int trials, const std::vector<MethodSpec>& methods,
                                         const KMeansParams& kmeans_params,
                                         std::uint64_t master_seed) {
    if (trials < 1) throw Error("run_protocol: trials must be >= 1");
    if (ks.empty()) throw Error("run_protocol: no K values");
    if (methods.empty()) throw Error("run_protocol: no methods");

    const std::size_t nk = ks.size();
    const std::size_t nm = methods.size();
    std::vector<std::vector<std::vector<TrialMetrics>>> cells(
        nm, std::vector<std::vector<TrialMetrics>>(nk, std::vector<TrialMetrics>(
                                                           static_cast<std::size_t>(trials))));

    parallel_jobs(static_cast<long long>(nk) * trials, [&](long long job) {
        const std::size_t ki = static_cast<std::size_t>(job) / static_cast<std::size_t>(trials);
        const auto t = static_cast<std::uint64_t>(job % trials);
        const int k = ks[ki];
        const std::uint64_t trial_seed =
            derive_seed(master_seed, static_cast<std::uint64_t>(k), t);

        auto [x, truth] = sample_categories(dataset, k, trial_seed);
        for (std::size_t m = 0; m < nm; ++m) {
            MethodSpec eff = with_rank(methods[m], static_cast<std::size_t>(k) + 1);
            eff.model.seed = derive_seed(trial_seed, 1);
            eff.cf.seed = derive_seed(trial_seed, 1);
            KMeansParams km = kmeans_params;
            km.seed = derive_seed(trial_seed, 2);
            const auto [ac, f] = run_clustering_trial(x, truth, eff, km);
            cells[m][ki][static_cast<std::size_t>(t)] = {trial_seed, ac, f};
        }
    });

    std::vector<ProtocolResult> out;
    for (std::size_t m = 0; m < nm; ++m) {
        ProtocolResult res;
        res.method = methods[m].method;
        for (std::size_t ki = 0; ki < nk; ++ki)
            res.by_k.push_back({ks[ki], aggregate(std::move(cells[m][ki]))});
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<NoiseSweepRow> noise_sweep(const Dataset& dataset, const NoiseSpec& noise, int k,
                                       int trials, const MethodSpec& method,
                                       const KMeansParams& kmeans_params,
                                       std::uint64_t master_seed) {
    validate_noise(noise);
    if (trials < 1) throw Error("noise_sweep: trials must be >= 1");

    const std::size_t nl = noise.variance_levels.size();
    std::vector<std::vector<TrialMetrics>> cells(
        nl, std::vector<TrialMetrics>(static_cast<std::size_t>(trials)));

    parallel_jobs(static_cast<long long>(nl) * trials, [&](long long job) {
        const std::size_t li = static_cast<std::size_t>(job) / static_cast<std::size_t>(trials);
        const auto t = static_cast<std::uint64_t>(job % trials);
        const double level = noise.variance_levels[li];
        const std::uint64_t trial_seed =
            derive_seed(master_seed, static_cast<std::uint64_t>(k), t);

        auto [x, truth] = sample_categories(dataset, k, trial_seed);
        NoiseSpec per_trial = noise;
        per_trial.seed = derive_seed(noise.seed, t);  // mask shared across levels only
        const DenseMatrix corrupted = corrupt_gaussian(x, per_trial, level);

        MethodSpec eff = with_rank(method, static_cast<std::size_t>(k) + 1);
        eff.model.seed = derive_seed(trial_seed, 1);
        eff.cf.seed = derive_seed(trial_seed, 1);
        KMeansParams km = kmeans_params;
        km.seed = derive_seed(trial_seed, 2);
        const auto [ac, f] = run_clustering_trial(corrupted, truth, eff, km);
        cells[li][static_cast<std::size_t>(t)] = {trial_seed, ac, f};
    });

    std::vector<NoiseSweepRow> rows;
    for (std::size_t li = 0; li < nl; ++li)
        rows.push_back({noise.variance_levels[li], aggregate(std::move(cells[li]))});
    return rows;
}

std::vector<LayerSweepRow> layer_sweep(const Dataset& dataset,
                                       const std::vector<std::size_t>& layer_counts, int k,
                                       int trials, const ModelConfig& base,
                                       const KMeansParams& kmeans_params,
                                       std::uint64_t master_seed) {
    if (layer_counts.empty()) throw Error("layer_sweep: no layer counts");
    if (trials < 1) throw Error("layer_sweep: trials must be >= 1");
    for (std::size_t l : layer_counts)
        if (l < 1) throw Error("layer_sweep: layer count must be >= 1");

    const std::size_t nl = layer_counts.size();
    std::vector<std::vector<TrialMetrics>> cells(
        nl, std::vector<TrialMetrics>(static_cast<std::size_t>(trials)));

    parallel_jobs(static_cast<long long>(nl) * trials, [&](long long job) {
        const std::size_t li = static_cast<std::size_t>(job) / static_cast<std::size_t>(trials);
        const auto t = static_cast<std::uint64_t>(job % trials);
        const std::size_t layers = layer_counts[li];
        const std::uint64_t trial_seed =
            derive_seed(master_seed, static_cast<std::uint64_t>(k), t);

        auto [x, truth] = sample_categories(dataset, k, trial_seed);  // shared across depths
        ModelConfig cfg = base;
        cfg.layer_dims.assign(layers, static_cast<std::size_t>(k) + 1);
        cfg.seed = derive_seed(trial_seed, 100 + layers);
        KMeansParams km = kmeans_params;
        km.seed = derive_seed(trial_seed, 200 + layers);

        MethodSpec spec;
        spec.method = Method::dscf;
        spec.model = cfg;
        const auto [ac, f] = run_clustering_trial(x, truth, spec, km);
        cells[li][static_cast<std::size_t>(t)] = {trial_seed, ac, f};
    });

    std::vector<LayerSweepRow> rows;
    for (std::size_t li = 0; li < nl; ++li)
        rows.push_back({layer_counts[li], aggregate(std::move(cells[li]))});
    return rows;
}

GridResult grid_search(const Dataset& dataset, const std::vector<double>& alphas,
                       const std::vector<double>& betas, const std::vector<double>& gammas,
                       int trials, const ModelConfig& base, const KMeansParams& kmeans_params,
                       std::uint64_t master_seed) {
    if (alphas.empty() || betas.empty() || gammas.empty())
        throw Error("grid_search: empty grid");

    constexpr int k = 2;  // the search protocol fixes two clusters
    GridResult result;
    bool have_best = false;

    for (double a : alphas)
        for (double b : betas)
            for (double g : gammas) {
                ModelConfig cfg = base;
                cfg.alpha = a;
                cfg.beta = b;
                cfg.gamma = g;
                MethodSpec spec;
                spec.method = Method::dscf;
                spec.model = cfg;

                const auto reports = run_protocol(dataset, {k}, trials, {spec},
                                                  kmeans_params, master_seed);
                const double ac = reports.front().by_k.front().report.ac_mean;
                result.surface.push_back({a, b, g, ac});
                if (!have_best || ac > result.best_ac) {
                    have_best = true;
                    result.best_ac = ac;
                    ModelConfig eff = cfg;
                    eff.layer_dims.assign(cfg.layer_dims.size(),
                                          static_cast<std::size_t>(k) + 1);
                    result.best = eff;
                }
            }
    return result;
}

}  // namespace dscf
