#ifndef DSCF_REPORT_HPP
#define DSCF_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "dscf/baselines.hpp"
#include "dscf/clustering.hpp"
#include "dscf/model.hpp"
#include "dscf/protocols.hpp"

namespace dscf {

// Insertion-ordered JSON keeps every emission byte-stable.
using Json = nlohmann::ordered_json;

Json model_config_json(const ModelConfig& cfg);
Json cf_config_json(const CfConfig& cfg);
Json kmeans_params_json(const KMeansParams& km);
Json metric_report_json(const MetricReport& rep);

/// The report schema: {method, config:{...}, results:[{K, ...}]}.
Json protocol_report_json(const std::string& method, Json config,
                          const std::vector<KReport>& by_k);

/// Rows "iter,layer,objective,delta_v" across all layers, full precision.
std::string trace_csv(const std::vector<LayerTrace>& traces);

/// Adapts CF-family results to the same trace layout.
std::vector<LayerTrace> cf_traces(const CfResult& result);
std::vector<LayerTrace> cascade_traces(const CascadeResult& result);

void write_text_file(const std::string& path, const std::string& content);

/// Full-precision decimal rendering used by every CSV emitter.
std::string format_double(double v);

}  // namespace dscf

#endif  // DSCF_REPORT_HPP
