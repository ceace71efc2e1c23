#include "dscf/baselines.hpp"

#include <cmath>
#include <utility>

#include "dscf/kernels.hpp"
#include "dscf/numerics.hpp"
#include "dscf/rng.hpp"

namespace dscf {

namespace {

void check_input(const DenseMatrix& x, const CfConfig& config) {
    if (x.empty()) throw BadShape("cf_train: empty data matrix");
    if (config.rank < 1) throw BadShape("cf_train: rank must be >= 1");
    if (config.rank > x.cols())
        throw BadShape("cf_train: rank " + std::to_string(config.rank) +
                       " exceeds sample count " + std::to_string(x.cols()));
    if (config.max_iters < 0) throw Error("cf_train: max_iters must be >= 0");
    if (!(config.tol > 0.0)) throw Error("cf_train: tol must be positive");
    for (double v : x.data())
        if (v < 0.0) throw BadShape("cf_train: data must be nonnegative");
}

double cf_objective(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& v) {
    const double d = frobenius_distance(x, multiply(multiply(x, w), v));
    return d * d;
}

}  // namespace

CfResult cf_train_from(const DenseMatrix& x, DenseMatrix w0, DenseMatrix v0,
                       const CfConfig& config) {
    check_input(x, config);
    const std::size_t n = x.cols();
    const std::size_t r = config.rank;
    if (w0.rows() != n || w0.cols() != r || v0.rows() != r || v0.cols() != n)
        throw ShapeMismatch("cf_train: starting factors do not match rank/sample count");

    CfResult res;
    res.W = std::move(w0);
    res.V = std::move(v0);

    const DenseMatrix k = gram(x);  // entrywise >= 0 for nonneg X: no sign split needed
    double prev_obj = cf_objective(x, res.W, res.V);

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const DenseMatrix v_old = res.V;

        // W <- W .* (K V^T) ./ (K W V V^T)
        const DenseMatrix kw = multiply(k, res.W);
        const DenseMatrix vvt = multiply_nt(res.V, res.V);
        res.W = hadamard(res.W, safe_div(multiply_nt(k, res.V), multiply(kw, vvt),
                                         config.eps_div));

        // V <- V .* (W^T K) ./ (W^T K W V)
        const DenseMatrix wtk = multiply_tn(res.W, k);
        res.V = hadamard(res.V, safe_div(wtk, multiply(multiply(wtk, res.W), res.V),
                                         config.eps_div));

        const double obj = cf_objective(x, res.W, res.V);
        if (!std::isfinite(obj)) throw Diverged("cf_train: objective became non-finite");
        res.trace.push_back({iter, obj, frobenius_distance(res.V, v_old)});

        if (std::abs(prev_obj - obj) <= config.tol * std::max(1.0, prev_obj)) {
            res.converged = true;
            break;
        }
        prev_obj = obj;
    }
    return res;
}

CfResult cf_train(const DenseMatrix& x, const CfConfig& config) {
    check_input(x, config);
    Rng rng(config.seed);
    DenseMatrix w(x.cols(), config.rank);
    for (double& v : w.data()) v = rng.uniform_open_closed();
    DenseMatrix v(config.rank, x.cols());
    for (double& e : v.data()) e = rng.uniform_open_closed();
    return cf_train_from(x, std::move(w), std::move(v), config);
}

CascadeResult cascade_cf_train_full(const DenseMatrix& x,
                                    const std::vector<std::size_t>& layer_ranks,
                                    const CfConfig& per_layer) {
    if (layer_ranks.empty()) throw BadShape("cascade_cf_train: no layer ranks given");
    CascadeResult res;
    DenseMatrix input = x;
    for (std::size_t rank : layer_ranks) {
        CfConfig cfg = per_layer;
        cfg.rank = rank;
        res.layers.push_back(cf_train(input, cfg));
        input = res.layers.back().V;  // handed down verbatim
    }
    res.V_final = res.layers.back().V;
    return res;
}

DenseMatrix cascade_cf_train(const DenseMatrix& x, const std::vector<std::size_t>& layer_ranks,
                             const CfConfig& per_layer) {
    return cascade_cf_train_full(x, layer_ranks, per_layer).V_final;
}

}  // namespace dscf
