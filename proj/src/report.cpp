#include "dscf/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dscf {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json model_config_json(const ModelConfig& cfg) {
    Json j;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["gamma"] = cfg.gamma;
    j["epsilon"] = cfg.epsilon;
    j["max_iters"] = cfg.max_iters;
    j["layer_dims"] = cfg.layer_dims;
    j["seed"] = cfg.seed;
    j["delta"] = cfg.delta;
    j["eps_div"] = cfg.eps_div;
    j["warm_start_v"] = cfg.warm_start_v;
    return j;
}

Json cf_config_json(const CfConfig& cfg) {
    Json j;
    j["rank"] = cfg.rank;
    j["max_iters"] = cfg.max_iters;
    j["tol"] = cfg.tol;
    j["seed"] = cfg.seed;
    j["eps_div"] = cfg.eps_div;
    return j;
}

Json kmeans_params_json(const KMeansParams& km) {
    Json j;
    j["restarts"] = km.restarts;
    j["max_iters"] = km.max_iters;
    j["tol"] = km.tol;
    j["seed"] = km.seed;
    return j;
}

Json metric_report_json(const MetricReport& rep) {
    Json j;
    j["ac_mean"] = rep.ac_mean;
    j["ac_std"] = rep.ac_std;
    j["f_mean"] = rep.f_mean;
    j["f_std"] = rep.f_std;
    Json runs = Json::array();
    for (const TrialMetrics& r : rep.runs) {
        Json e;
        e["seed"] = r.seed;
        e["ac"] = r.ac;
        e["fscore"] = r.fscore;
        runs.push_back(std::move(e));
    }
    j["runs"] = std::move(runs);
    return j;
}

Json protocol_report_json(const std::string& method, Json config,
                          const std::vector<KReport>& by_k) {
    Json j;
    j["method"] = method;
    j["config"] = std::move(config);
    Json results = Json::array();
    for (const KReport& kr : by_k) {
        Json e;
        e["K"] = kr.k;
        const Json m = metric_report_json(kr.report);
        e["ac_mean"] = m["ac_mean"];
        e["ac_std"] = m["ac_std"];
        e["f_mean"] = m["f_mean"];
        e["f_std"] = m["f_std"];
        e["runs"] = m["runs"];
        results.push_back(std::move(e));
    }
    j["results"] = std::move(results);
    return j;
}

std::string trace_csv(const std::vector<LayerTrace>& traces) {
    std::ostringstream out;
    out << "iter,layer,objective,delta_v\n";
    for (const LayerTrace& lt : traces)
        for (const TraceRow& row : lt.rows)
            out << row.iter << ',' << lt.layer << ',' << format_double(row.objective) << ','
                << format_double(row.delta_v) << '\n';
    return out.str();
}

std::vector<LayerTrace> cf_traces(const CfResult& result) {
    return {LayerTrace{1, result.converged, result.trace}};
}

std::vector<LayerTrace> cascade_traces(const CascadeResult& result) {
    std::vector<LayerTrace> out;
    for (std::size_t l = 0; l < result.layers.size(); ++l)
        out.push_back(LayerTrace{l + 1, result.layers[l].converged, result.layers[l].trace});
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace dscf
