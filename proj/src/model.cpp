#include "dscf/model.hpp"

#include <cmath>
#include <iostream>
#include <utility>

#include "dscf/kernels.hpp"
#include "dscf/numerics.hpp"

namespace dscf {

namespace {

void validate_config(const ModelConfig& cfg, std::size_t n) {
    if (cfg.layer_dims.empty()) throw BadShape("config: layer_dims must be non-empty");
    for (std::size_t r : cfg.layer_dims) {
        if (r < 1) throw BadShape("config: layer rank must be >= 1");
        if (r > n)
            throw BadShape("config: layer rank " + std::to_string(r) + " exceeds sample count " +
                           std::to_string(n));
    }
    if (!(cfg.epsilon > 0.0)) throw Error("config: epsilon must be positive");
    if (!(cfg.gamma > 0.0)) throw Error("config: gamma must be positive");
    if (!(cfg.delta > 0.0)) throw Error("config: delta must be positive");
    if (cfg.alpha < 0.0 || cfg.beta < 0.0) throw Error("config: alpha and beta must be >= 0");
    if (cfg.max_iters < 0) throw Error("config: max_iters must be >= 0");
}

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform_open_closed();
    return m;
}

bool is_first_layer(const FactorState& s) { return s.layer == 1; }

// Pi_{l-1} for l >= 2; never called at layer 1 (the identity is elided).
DenseMatrix prefix_before_layer(const FactorState& s) {
    DenseMatrix p = s.W[0];
    for (std::size_t k = 1; k + 1 < s.layer; ++k) p = multiply(p, s.W[k]);
    return p;
}

// Pi_l = Pi_{l-1} W_l, the N x r_l coefficient prefix of the current layer.
DenseMatrix full_prefix(const FactorState& s) {
    DenseMatrix p = s.W[0];
    for (std::size_t k = 1; k < s.layer; ++k) p = multiply(p, s.W[k]);
    return p;
}

DenseMatrix clean_data(const FactorState& s) { return subtract(s.X, s.E); }

void require_nonnegative(const DenseMatrix& m, const char* what) {
    for (double v : m.data())
        if (v < 0.0) throw Diverged(std::string(what) + " lost nonnegativity");
}

}  // namespace

FactorState init_state(const DenseMatrix& x, const ModelConfig& config) {
    const std::size_t n = x.cols();
    if (x.rows() == 0 || n == 0) throw BadShape("init_state: empty data matrix");
    validate_config(config, n);
    for (double v : x.data())
        if (v < 0.0) throw BadShape("init_state: data must be nonnegative");

    std::size_t zero_cols = 0;
    for (double cn : column_l2_norms(x))
        if (cn == 0.0) ++zero_cols;
    if (zero_cols > 0)
        std::cerr << "warning: data has " << zero_cols << " all-zero column(s)\n";

    FactorState s;
    s.X = x;
    s.E = DenseMatrix(x.rows(), n, 0.0);
    s.S = DenseMatrix(n, n, 0.0);
    s.Dw = DiagWeights::identity(n);
    s.layer = 1;
    s.rng = Rng(config.seed);
    s.W.push_back(random_matrix(s.rng, n, config.layer_dims[0]));
    s.V = random_matrix(s.rng, config.layer_dims[0], n);
    return s;
}

void advance_layer(FactorState& state, const ModelConfig& config) {
    const std::size_t next = state.layer + 1;
    if (next > config.layer_count())
        throw BadShape("advance_layer: no layer " + std::to_string(next) + " in config");
    const std::size_t r_prev = config.layer_dims[next - 2];
    const std::size_t r = config.layer_dims[next - 1];
    state.layer = next;
    state.W.push_back(random_matrix(state.rng, r_prev, r));
    if (!(config.warm_start_v && r == r_prev))
        state.V = random_matrix(state.rng, r, state.X.cols());
    state.trace.clear();
    state.converged = false;
}

DenseMatrix prefix_product(const FactorState& state, std::size_t l) {
    if (l < 1 || l > state.W.size())
        throw BadShape("prefix_product: layer index " + std::to_string(l) + " out of range");
    if (l == 1) return DenseMatrix::identity(state.X.cols());
    DenseMatrix p = state.W[0];
    for (std::size_t k = 1; k + 1 < l; ++k) p = multiply(p, state.W[k]);
    return p;
}

double objective(const FactorState& state, const ModelConfig& config) {
    const DenseMatrix& w = state.W[state.layer - 1];
    const DenseMatrix pw =
        is_first_layer(state) ? w : multiply(prefix_before_layer(state), w);
    const DenseMatrix r = multiply(pw, state.V);  // N x N coefficient matrix
    const DenseMatrix xc = clean_data(state);

    const double recon = frobenius_distance(xc, multiply(xc, r));
    const double simi = frobenius_distance(state.S, r);
    const double ridge = frobenius_norm(multiply(w, state.V));
    const double local = frobenius_distance(state.V, multiply(state.V, state.S));

    return recon * recon + config.alpha * (simi * simi + ridge * ridge) +
           config.beta * local * local + config.gamma * l21_norm(state.E);
}

namespace {

// Shared core of the multiplicative W step; the positive/negative parts of
// the recovered-data kernel are passed in so one factorization step can
// split the kernel once for both factor updates.
DenseMatrix update_w_core(const FactorState& state, const ModelConfig& config,
                          const DenseMatrix& kp, const DenseMatrix& kn);
DenseMatrix update_v_core(const FactorState& state, const ModelConfig& config,
                          const DenseMatrix& kp, const DenseMatrix& kn);

}  // namespace

DenseMatrix update_w(const FactorState& state, const ModelConfig& config) {
    const auto [kp, kn] = pos_neg_split(gram(clean_data(state)));
    return update_w_core(state, config, kp, kn);
}

DenseMatrix update_v(const FactorState& state, const ModelConfig& config) {
    const auto [kp, kn] = pos_neg_split(gram(clean_data(state)));
    return update_v_core(state, config, kp, kn);
}

namespace {

DenseMatrix update_w_core(const FactorState& state, const ModelConfig& config,
                          const DenseMatrix& kp, const DenseMatrix& kn) {
    const DenseMatrix& w = state.W[state.layer - 1];
    const DenseMatrix& v = state.V;
    const bool first = is_first_layer(state);

    const auto [sp, sn] = pos_neg_split(state.S);

    // With Pi = I at layer 1 the left-projections collapse to the operand.
    DenseMatrix pi;
    if (!first) pi = prefix_before_layer(state);
    auto project = [&](const DenseMatrix& m) { return first ? m : multiply_tn(pi, m); };

    const DenseMatrix pw = first ? w : multiply(pi, w);    // N x r
    const DenseMatrix vvt = multiply_nt(v, v);             // r x r
    const DenseMatrix a = project(kp);                     // Pi^T Kc+  (p x N)
    const DenseMatrix b = project(kn);                     // Pi^T Kc-  (p x N)

    DenseMatrix num = multiply_nt(a, v);
    num = add(num, scale(multiply_nt(project(sp), v), config.alpha));
    num = add(num, multiply(multiply(b, pw), vvt));

    DenseMatrix den = multiply(multiply(a, pw), vvt);
    const DenseMatrix gw = first ? w : multiply(project(pi), w);  // Pi^T Pi W
    den = add(den, scale(multiply(gw, vvt), config.alpha));
    den = add(den, scale(multiply(w, vvt), config.alpha));
    den = add(den, multiply_nt(b, v));
    den = add(den, scale(multiply_nt(project(sn), v), config.alpha));

    DenseMatrix out = hadamard(w, safe_div(num, den, config.eps_div));
    require_finite(out, "update_w output");
    require_nonnegative(out, "update_w output");
    return out;
}

DenseMatrix update_v_core(const FactorState& state, const ModelConfig& config,
                          const DenseMatrix& kp, const DenseMatrix& kn) {
    const DenseMatrix& w = state.W[state.layer - 1];
    const DenseMatrix& v = state.V;
    const bool first = is_first_layer(state);

    const auto [sp, sn] = pos_neg_split(state.S);

    const DenseMatrix pw = first ? w : multiply(prefix_before_layer(state), w);  // N x r

    const DenseMatrix tp = multiply_tn(pw, kp);  // r x N
    const DenseMatrix tn = multiply_tn(pw, kn);  // r x N
    const DenseMatrix gp = multiply(tp, pw);     // r x r
    const DenseMatrix gn = multiply(tn, pw);     // r x r
    const DenseMatrix pwtpw = multiply_tn(pw, pw);
    const DenseMatrix wtw = multiply_tn(w, w);

    // Q = (I - S)(I - S)^T
    const DenseMatrix theta = subtract(DenseMatrix::identity(state.S.rows()), state.S);
    const auto [qp, qn] = pos_neg_split(multiply_nt(theta, theta));

    DenseMatrix num = add(tp, scale(multiply_tn(pw, sp), config.alpha));
    num = add(num, multiply(gn, v));
    num = add(num, scale(multiply(v, qn), config.beta));

    DenseMatrix den = multiply(gp, v);
    den = add(den, scale(multiply(pwtpw, v), config.alpha));
    den = add(den, scale(multiply(wtw, v), config.alpha));
    den = add(den, scale(multiply(v, qp), config.beta));
    den = add(den, tn);
    den = add(den, scale(multiply_tn(pw, sn), config.alpha));

    DenseMatrix out = hadamard(v, safe_div(num, den, config.eps_div));
    require_finite(out, "update_v output");
    require_nonnegative(out, "update_v output");
    return out;
}

}  // namespace

DenseMatrix update_s(const FactorState& state, const ModelConfig& config) {
    if (!(config.alpha + config.beta > 0.0))
        throw Error("update_s: alpha + beta must be positive");
    const std::size_t n = state.X.cols();
    const DenseMatrix vtv = gram(state.V);  // V^T V, N x N

    DenseMatrix lhs = scale(vtv, config.beta);
    for (std::size_t i = 0; i < n; ++i) lhs(i, i) += config.alpha;

    const DenseMatrix target = multiply(full_prefix(state), state.V);  // Pi_l V
    const DenseMatrix rhs = add(scale(target, config.alpha), scale(vtv, config.beta));
    return solve_spd(lhs, rhs);
}

DenseMatrix update_e(const FactorState& state, const ModelConfig& config) {
    const std::size_t n = state.X.cols();
    if (state.Dw.size() != n) throw ShapeMismatch("update_e: diagonal weight size mismatch");

    // Theta = I - R with R = Pi_l V of rank r, so Theta Theta^T expands to
    // I - R - R^T + Pi_l (V V^T) Pi_l^T without any N^3 product.
    const DenseMatrix pi_l = full_prefix(state);
    const DenseMatrix r = multiply(pi_l, state.V);
    const DenseMatrix rrt = multiply_nt(multiply(pi_l, multiply_nt(state.V, state.V)), pi_l);
    DenseMatrix tt(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            tt(i, j) = (i == j ? 1.0 : 0.0) - r(i, j) - r(j, i) + rrt(i, j);

    DenseMatrix lhs = tt;
    for (std::size_t i = 0; i < n; ++i) lhs(i, i) += config.gamma * state.Dw[i];

    // E (Theta Theta^T + gamma Dw) = X Theta Theta^T, solved transposed.
    const DenseMatrix rhs = multiply_nt(tt, state.X);  // N x D
    return transpose(solve_spd(lhs, rhs));
}

DiagWeights update_dw(const DenseMatrix& e, double delta) {
    if (!(delta > 0.0)) throw Error("update_dw: delta must be positive");
    std::vector<double> d = column_l2_norms(e);
    for (double& v : d) v = 1.0 / (2.0 * std::max(v, delta));
    return DiagWeights(std::move(d));
}

FactorState train_layer(FactorState state, const ModelConfig& config) {
    state.converged = false;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const DenseMatrix v_old = state.V;
        // E is fixed while W and V step, so the kernel split is shared.
        const auto [kp, kn] = pos_neg_split(gram(clean_data(state)));
        state.W[state.layer - 1] = update_w_core(state, config, kp, kn);
        state.V = update_v_core(state, config, kp, kn);
        state.S = update_s(state, config);
        state.E = update_e(state, config);
        state.Dw = update_dw(state.E, config.delta);

        const double dv = frobenius_distance(state.V, v_old);
        const double obj = objective(state, config);
        if (!std::isfinite(obj)) throw Diverged("objective became non-finite");
        state.trace.push_back({iter, obj, dv});

        if (dv <= config.epsilon) {
            state.converged = true;
            break;
        }
    }
    return state;
}

TrainedModel train(const DenseMatrix& x, const ModelConfig& config) {
    FactorState state = init_state(x, config);
    std::vector<LayerTrace> traces;
    for (std::size_t l = 1; l <= config.layer_count(); ++l) {
        if (l > 1) advance_layer(state, config);
        state = train_layer(std::move(state), config);
        traces.push_back({l, state.converged, state.trace});
    }

    TrainedModel model;
    model.V_final = state.V;
    model.W = state.W;
    model.E = state.E;
    model.objective_trace = std::move(traces);
    model.config = config;

    // Shape chain sanity: R = W_1...W_L V must close to N x N.
    if (model.W.front().rows() != x.cols() || model.V_final.cols() != x.cols())
        throw BadShape("train: factor shape chain does not close");
    return model;
}

DenseMatrix coefficient_matrix(const TrainedModel& model) {
    DenseMatrix p = model.W.front();
    for (std::size_t k = 1; k < model.W.size(); ++k) p = multiply(p, model.W[k]);
    return multiply(p, model.V_final);
}

DenseMatrix final_similarity(const TrainedModel& model) {
    const ModelConfig& cfg = model.config;
    if (!(cfg.alpha + cfg.beta > 0.0))
        throw Error("final_similarity: alpha + beta must be positive");

    DenseMatrix p = model.W.front();
    for (std::size_t k = 1; k < model.W.size(); ++k) p = multiply(p, model.W[k]);

    const std::size_t n = model.V_final.cols();
    const DenseMatrix vtv = gram(model.V_final);
    DenseMatrix lhs = scale(vtv, cfg.beta);
    for (std::size_t i = 0; i < n; ++i) lhs(i, i) += cfg.alpha;
    const DenseMatrix rhs =
        add(scale(multiply(p, model.V_final), cfg.alpha), scale(vtv, cfg.beta));
    return solve_spd(lhs, rhs);
}

}  // namespace dscf
