#ifndef DSCF_MODEL_HPP
#define DSCF_MODEL_HPP

#include <cstdint>
#include <vector>

#include "dscf/matrix.hpp"
#include "dscf/rng.hpp"

namespace dscf {

/// Hyperparameters for one DSCF-Net run.
struct ModelConfig {
    double alpha = 1e4;   // weight of the similarity-target and ridge terms
    double beta = 1e4;    // weight of the locality term ||V - VS||_F^2
    double gamma = 1e4;   // weight of the column-sparse error penalty
    double epsilon = 1e-3;            // per-layer stop: ||V_{t+1} - V_t||_F <= epsilon
    int max_iters = 500;              // per-layer iteration cap
    std::vector<std::size_t> layer_dims = {4, 4, 4};  // ranks r_1..r_L
    std::uint64_t seed = 0;
    double delta = 1e-8;              // guard for the diagonal weights
    double eps_div = 1e-12;           // guard for multiplicative ratios
    bool warm_start_v = true;         // reuse previous layer's V when ranks match

    std::size_t layer_count() const { return layer_dims.size(); }
};

struct TraceRow {
    int iter;
    double objective;
    double delta_v;
};

struct LayerTrace {
    std::size_t layer = 0;  // 1-based
    bool converged = false;
    std::vector<TraceRow> rows;
};

/// Mutable training state of one run. Owned by exactly one training loop;
/// independent runs may execute concurrently.
struct FactorState {
    DenseMatrix X;               // D x N data
    DenseMatrix E;               // D x N sparse error
    std::vector<DenseMatrix> W;  // W[k] is r_k x r_{k+1} with r_0 = N
    DenseMatrix V;               // r_l x N, representation of the layer in training
    DenseMatrix S;               // N x N auxiliary similarity
    DiagWeights Dw;              // size N
    std::size_t layer = 1;       // 1-based index of the layer being trained
    std::vector<TraceRow> trace; // current layer only
    bool converged = false;
    Rng rng{0};                  // initialization stream, continues across layers
};

struct TrainedModel {
    DenseMatrix V_final;
    std::vector<DenseMatrix> W;
    DenseMatrix E;
    std::vector<LayerTrace> objective_trace;
    ModelConfig config;
};

/// Random (0,1] factors for layer 1, zero S and E, identity diagonal weights.
/// X must be nonnegative; all-zero columns are tolerated.
FactorState init_state(const DenseMatrix& x, const ModelConfig& config);

/// Moves the state to the next layer: appends a fresh random W at the new
/// width and re-initializes V (or keeps it when warm_start_v applies).
void advance_layer(FactorState& state, const ModelConfig& config);

/// W_1 ... W_{l-1}, shape N x r_{l-1}; the N x N identity when l = 1.
DenseMatrix prefix_product(const FactorState& state, std::size_t l);

/// Full relaxed objective at the state's current layer.
double objective(const FactorState& state, const ModelConfig& config);

/// One multiplicative step for the current layer's weight matrix.
DenseMatrix update_w(const FactorState& state, const ModelConfig& config);

/// One multiplicative step for the representation.
DenseMatrix update_v(const FactorState& state, const ModelConfig& config);

/// Closed-form minimizer of the similarity subproblem.
DenseMatrix update_s(const FactorState& state, const ModelConfig& config);

/// Closed-form minimizer of the error subproblem at fixed diagonal weights.
DenseMatrix update_e(const FactorState& state, const ModelConfig& config);

/// d_ii = 1 / (2 max(||e_i||, delta)).
DiagWeights update_dw(const DenseMatrix& e, double delta);

/// Runs the inner loop (W, V, S, E, Dw per iteration) until the V change
/// drops below epsilon or max_iters is hit. Appends to the state's trace.
FactorState train_layer(FactorState state, const ModelConfig& config);

/// Full layer-wise training. Layer factors are (re)initialized from the
/// seeded stream; S, E and the diagonal weights carry across layers.
TrainedModel train(const DenseMatrix& x, const ModelConfig& config);

/// Self-representation coefficient matrix R = W_1 ... W_L V, N x N.
DenseMatrix coefficient_matrix(const TrainedModel& model);

/// The similarity matrix the last training iteration produced. It is the
/// exact minimizer at the trained factors, so recomputing it here matches
/// the in-loop value bit for bit (for a model trained at least one step).
DenseMatrix final_similarity(const TrainedModel& model);

}  // namespace dscf

#endif  // DSCF_MODEL_HPP
