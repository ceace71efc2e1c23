#ifndef DSCF_BASELINES_HPP
#define DSCF_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "dscf/matrix.hpp"
#include "dscf/model.hpp"

namespace dscf {

/// Settings for one concept-factorization run (objective ||X - XWV||_F^2).
struct CfConfig {
    std::size_t rank = 2;
    int max_iters = 500;
    double tol = 1e-6;  // stop when |obj_t - obj_{t-1}| <= tol * max(1, obj_{t-1})
    std::uint64_t seed = 0;
    double eps_div = 1e-12;
};

struct CfResult {
    DenseMatrix W;  // N x r
    DenseMatrix V;  // r x N
    std::vector<TraceRow> trace;
    bool converged = false;
};

/// Multiplicative concept factorization with random (0,1] initialization.
CfResult cf_train(const DenseMatrix& x, const CfConfig& config);

/// Same solver from caller-supplied starting factors (used by the cascade
/// and by fixed-point checks).
CfResult cf_train_from(const DenseMatrix& x, DenseMatrix w0, DenseMatrix v0,
                       const CfConfig& config);

struct CascadeResult {
    DenseMatrix V_final;
    std::vector<CfResult> layers;
};

/// Naive multilayer baseline: each layer factorizes the previous layer's V
/// verbatim (no normalization, no joint refinement).
CascadeResult cascade_cf_train_full(const DenseMatrix& x,
                                    const std::vector<std::size_t>& layer_ranks,
                                    const CfConfig& per_layer);

/// Convenience wrapper returning only the last layer's representation.
DenseMatrix cascade_cf_train(const DenseMatrix& x, const std::vector<std::size_t>& layer_ranks,
                             const CfConfig& per_layer);

}  // namespace dscf

#endif  // DSCF_BASELINES_HPP
