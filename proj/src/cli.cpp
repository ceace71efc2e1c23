#include "dscf/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dscf/dataset.hpp"
#include "dscf/heatmap.hpp"
#include "dscf/report.hpp"

namespace dscf {

namespace {

// Thrown for malformed argument values discovered after CLI11 parsing
// (list-valued flags); mapped to exit code 1 like other usage errors.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

double parse_one_double(const std::string& tok, const char* flag) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw UsageError(std::string(flag) + ": '" + tok + "' is not a number");
    return v;
}

std::vector<double> parse_double_list(const std::string& s, const char* flag) {
    std::vector<double> out;
    for (const std::string& tok : split_list(s)) out.push_back(parse_one_double(tok, flag));
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* flag) {
    std::vector<int> out;
    for (const std::string& tok : split_list(s)) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw UsageError(std::string(flag) + ": '" + tok + "' is not an integer");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const char* flag) {
    std::vector<std::size_t> out;
    for (int v : parse_int_list(s, flag)) {
        if (v < 1) throw UsageError(std::string(flag) + ": entries must be >= 1");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

struct Settings {
    ModelConfig model;
    CfConfig cf;
    KMeansParams km;
    int trials = 30;
};

template <typename T>
T config_value(const Json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' has the wrong type");
    }
}

Settings load_settings(const std::string& path) {
    Settings s;
    if (path.empty()) return s;

    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw Error("config parse failed: " + std::string(e.what()));
    }
    if (!j.is_object()) throw Error("config: top level must be a JSON object");

    for (const auto& [key, value] : j.items()) {
        if (key == "alpha") s.model.alpha = config_value<double>(value, key);
        else if (key == "beta") s.model.beta = config_value<double>(value, key);
        else if (key == "gamma") s.model.gamma = config_value<double>(value, key);
        else if (key == "epsilon") s.model.epsilon = config_value<double>(value, key);
        else if (key == "max_iters") s.model.max_iters = config_value<int>(value, key);
        else if (key == "layer_dims") {
            const auto dims = config_value<std::vector<long long>>(value, key);
            s.model.layer_dims.clear();
            for (long long d : dims) {
                if (d < 1) throw Error("config: layer_dims entries must be >= 1");
                s.model.layer_dims.push_back(static_cast<std::size_t>(d));
            }
        } else if (key == "seed") s.model.seed = config_value<std::uint64_t>(value, key);
        else if (key == "delta") s.model.delta = config_value<double>(value, key);
        else if (key == "eps_div") {
            s.model.eps_div = config_value<double>(value, key);
            s.cf.eps_div = s.model.eps_div;
        } else if (key == "warm_start_v") s.model.warm_start_v = config_value<bool>(value, key);
        else if (key == "kmeans_restarts") s.km.restarts = config_value<int>(value, key);
        else if (key == "kmeans_max_iters") s.km.max_iters = config_value<int>(value, key);
        else if (key == "kmeans_tol") s.km.tol = config_value<double>(value, key);
        else if (key == "trials") s.trials = config_value<int>(value, key);
        else if (key == "cf_rank") {
            const auto r = config_value<long long>(value, key);
            if (r < 1) throw Error("config: cf_rank must be >= 1");
            s.cf.rank = static_cast<std::size_t>(r);
        } else if (key == "cf_max_iters") s.cf.max_iters = config_value<int>(value, key);
        else if (key == "cf_tol") s.cf.tol = config_value<double>(value, key);
        else throw Error("config: unknown key '" + key + "'");
    }
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json data_json(const Dataset& ds) {
    Json j;
    j["features"] = ds.feature_dim();
    j["samples"] = ds.sample_count();
    j["classes"] = ds.class_count;
    return j;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    SynthSpec spec;
    std::string out;
};

void run_synth(const SynthArgs& a) {
    const Dataset ds = generate_synthetic(a.spec);
    save_dataset(ds, a.out);
    std::cout << "wrote " << ds.sample_count() << " samples (" << ds.class_count
              << " classes, dim " << ds.feature_dim() << ") to " << a.out << '\n';
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string data, config, method = "dscf", out_prefix;
};

void run_train(const TrainArgs& a, const Settings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = load_dataset(a.data);
    const double load_s = seconds_since(t0);

    const Method method = parse_method(a.method);
    std::vector<LayerTrace> traces;
    Json config_echo;
    Json layers = Json::array();
    double final_objective = 0.0;
    bool have_objective = false;

    const auto t1 = std::chrono::steady_clock::now();
    if (method == Method::dscf) {
        const TrainedModel model = train(ds.X, settings.model);
        traces = model.objective_trace;
        config_echo = model_config_json(settings.model);
    } else if (method == Method::cf) {
        const CfResult res = cf_train(ds.X, settings.cf);
        traces = cf_traces(res);
        config_echo = cf_config_json(settings.cf);
    } else {
        const CascadeResult res =
            cascade_cf_train_full(ds.X, settings.model.layer_dims, settings.cf);
        traces = cascade_traces(res);
        config_echo["layer_ranks"] = settings.model.layer_dims;
        config_echo["cf"] = cf_config_json(settings.cf);
    }
    const double train_s = seconds_since(t1);

    for (const LayerTrace& lt : traces) {
        Json e;
        e["layer"] = lt.layer;
        e["iterations"] = lt.rows.size();
        e["converged"] = lt.converged;
        if (!lt.rows.empty()) e["final_objective"] = lt.rows.back().objective;
        layers.push_back(std::move(e));
        if (!lt.rows.empty()) {
            final_objective = lt.rows.back().objective;
            have_objective = true;
        }
    }

    Json summary;
    summary["method"] = a.method;
    summary["config"] = config_echo;
    summary["data"] = data_json(ds);
    summary["layers"] = layers;
    if (have_objective) summary["final_objective"] = final_objective;

    write_text_file(a.out_prefix + "_trace.csv", trace_csv(traces));
    write_text_file(a.out_prefix + "_summary.json", summary.dump(2) + "\n");
    std::printf("load %.3fs  train %.3fs  outputs %s_{trace.csv,summary.json}\n", load_s,
                train_s, a.out_prefix.c_str());
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string data, config, method = "dscf", ks = "2,3,4,5,6", out;
    int trials = -1;  // <0: take from settings
    std::uint64_t master_seed = 0;
};

void run_eval(const EvalArgs& a, const Settings& settings) {
    const Dataset ds = load_dataset(a.data);
    const std::vector<int> ks = parse_int_list(a.ks, "--ks");
    const int trials = a.trials >= 0 ? a.trials : settings.trials;

    MethodSpec spec;
    spec.method = parse_method(a.method);
    spec.model = settings.model;
    spec.cf = settings.cf;

    const auto t0 = std::chrono::steady_clock::now();
    const auto results =
        run_protocol(ds, ks, trials, {spec}, settings.km, a.master_seed);
    const double eval_s = seconds_since(t0);

    Json config_echo;
    config_echo["model"] = model_config_json(settings.model);
    config_echo["cf"] = cf_config_json(settings.cf);
    config_echo["kmeans"] = kmeans_params_json(settings.km);
    config_echo["trials"] = trials;
    config_echo["ks"] = ks;
    config_echo["master_seed"] = a.master_seed;

    const Json report =
        protocol_report_json(method_name(spec.method), config_echo, results.front().by_k);
    write_text_file(a.out, report.dump(2) + "\n");
    std::printf("evaluated %zu K values x %d trials in %.3fs -> %s\n", ks.size(), trials,
                eval_s, a.out.c_str());
}

// ---- sweep-noise ----------------------------------------------------------

struct NoiseArgs {
    std::string data, config, method = "dscf", levels = "0,0.2,0.4,0.6,0.8,1";
    int k = 3, trials = 10;
    double pixel_fraction = 0.3;
    std::uint64_t noise_seed = 0, master_seed = 0;
    std::string out, out_report;
};

void run_sweep_noise(const NoiseArgs& a, const Settings& settings) {
    const Dataset ds = load_dataset(a.data);
    NoiseSpec noise;
    noise.variance_levels = parse_double_list(a.levels, "--levels");
    noise.pixel_fraction = a.pixel_fraction;
    noise.seed = a.noise_seed;

    MethodSpec spec;
    spec.method = parse_method(a.method);
    spec.model = settings.model;
    spec.cf = settings.cf;

    const auto rows = noise_sweep(ds, noise, a.k, a.trials, spec, settings.km, a.master_seed);

    std::ostringstream csv;
    csv << "level,ac_mean,ac_std,f_mean,f_std\n";
    for (const NoiseSweepRow& r : rows)
        csv << format_double(r.level) << ',' << format_double(r.report.ac_mean) << ','
            << format_double(r.report.ac_std) << ',' << format_double(r.report.f_mean) << ','
            << format_double(r.report.f_std) << '\n';
    write_text_file(a.out, csv.str());

    if (!a.out_report.empty()) {
        Json j;
        j["method"] = a.method;
        Json cfg;
        cfg["model"] = model_config_json(settings.model);
        cfg["cf"] = cf_config_json(settings.cf);
        cfg["kmeans"] = kmeans_params_json(settings.km);
        cfg["variance_levels"] = noise.variance_levels;
        cfg["pixel_fraction"] = noise.pixel_fraction;
        cfg["noise_seed"] = noise.seed;
        cfg["clamped_nonnegative"] = true;
        cfg["k"] = a.k;
        cfg["trials"] = a.trials;
        cfg["master_seed"] = a.master_seed;
        j["config"] = cfg;
        Json results = Json::array();
        for (const NoiseSweepRow& r : rows) {
            Json e;
            e["level"] = r.level;
            e["ac_mean"] = r.report.ac_mean;
            e["ac_std"] = r.report.ac_std;
            e["f_mean"] = r.report.f_mean;
            e["f_std"] = r.report.f_std;
            results.push_back(std::move(e));
        }
        j["results"] = std::move(results);
        write_text_file(a.out_report, j.dump(2) + "\n");
    }
    std::cout << "noise sweep (" << rows.size() << " levels) -> " << a.out << '\n';
}

// ---- sweep-layers ---------------------------------------------------------

struct LayersArgs {
    std::string data, config, layers = "1,2,3";
    int k = 3, trials = 10;
    std::uint64_t master_seed = 0;
    std::string out;
};

void run_sweep_layers(const LayersArgs& a, const Settings& settings) {
    const Dataset ds = load_dataset(a.data);
    const auto counts = parse_size_list(a.layers, "--layers");

    const auto rows =
        layer_sweep(ds, counts, a.k, a.trials, settings.model, settings.km, a.master_seed);

    std::ostringstream csv;
    csv << "layers,ac_mean,ac_std,f_mean,f_std\n";
    for (const LayerSweepRow& r : rows)
        csv << r.layers << ',' << format_double(r.report.ac_mean) << ','
            << format_double(r.report.ac_std) << ',' << format_double(r.report.f_mean) << ','
            << format_double(r.report.f_std) << '\n';
    write_text_file(a.out, csv.str());
    std::cout << "layer sweep (" << rows.size() << " depths) -> " << a.out << '\n';
}

// ---- grid -----------------------------------------------------------------

struct GridArgs {
    std::string data, config;
    std::string alphas = "100,10000,1000000";
    std::string betas = "100,10000,1000000";
    std::string gammas = "100,10000,1000000";
    int trials = 5;
    std::uint64_t master_seed = 0;
    std::string out_surface, out_best;
};

void run_grid(const GridArgs& a, const Settings& settings) {
    const Dataset ds = load_dataset(a.data);
    const GridResult res = grid_search(
        ds, parse_double_list(a.alphas, "--alphas"), parse_double_list(a.betas, "--betas"),
        parse_double_list(a.gammas, "--gammas"), a.trials, settings.model, settings.km,
        a.master_seed);

    std::ostringstream csv;
    csv << "alpha,beta,gamma,ac_mean\n";
    for (const GridPoint& p : res.surface)
        csv << format_double(p.alpha) << ',' << format_double(p.beta) << ','
            << format_double(p.gamma) << ',' << format_double(p.ac_mean) << '\n';
    write_text_file(a.out_surface, csv.str());

    Json best;
    best["best"] = model_config_json(res.best);
    best["best_ac"] = res.best_ac;
    best["k"] = 2;
    best["trials"] = a.trials;
    best["master_seed"] = a.master_seed;
    write_text_file(a.out_best, best.dump(2) + "\n");
    std::cout << "grid (" << res.surface.size() << " points, best ac " << res.best_ac
              << ") -> " << a.out_surface << ", " << a.out_best << '\n';
}

// ---- export-weights -------------------------------------------------------

struct ExportArgs {
    std::string data, config, matrix = "R", format = "pgm", out;
};

void run_export(const ExportArgs& a, const Settings& settings) {
    const Dataset ds = load_dataset(a.data);
    const TrainedModel model = train(ds.X, settings.model);
    const DenseMatrix m =
        a.matrix == "S" ? final_similarity(model) : coefficient_matrix(model);
    export_heatmap(m, a.out, parse_heatmap_format(a.format));
    std::cout << "exported " << a.matrix << " (" << m.rows() << "x" << m.cols() << ") -> "
              << a.out << '\n';
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Deep self-representative concept factorization experiments"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic blob dataset CSV");
    cmd_synth->add_option("--classes", synth.spec.classes, "Number of classes");
    cmd_synth->add_option("--per-class", synth.spec.per_class, "Samples per class");
    cmd_synth->add_option("--dim", synth.spec.dim, "Feature dimension");
    cmd_synth->add_option("--separation", synth.spec.separation,
                          "Minimum mean distance in sigmas");
    cmd_synth->add_option("--sigma", synth.spec.sigma, "Per-coordinate spread");
    cmd_synth->add_option("--seed", synth.spec.seed, "Generator seed");
    cmd_synth->add_option("--out", synth.out, "Output CSV path")->required();

    TrainArgs tr;
    double ov_alpha = 0, ov_beta = 0, ov_gamma = 0, ov_epsilon = 0, ov_tol = 0;
    int ov_max_iters = 0, ov_rank = 0;
    std::uint64_t ov_seed = 0;
    std::string ov_layer_dims;
    auto* cmd_train = app.add_subcommand("train", "Train one model and emit trace + summary");
    cmd_train->add_option("--data", tr.data, "Dataset CSV")->required();
    cmd_train->add_option("--config", tr.config, "JSON config file");
    cmd_train->add_option("--method", tr.method, "Training method")
        ->check(CLI::IsMember({"dscf", "cf", "cascade"}));
    cmd_train->add_option("--out-prefix", tr.out_prefix, "Prefix for output files")->required();
    auto* o_alpha = cmd_train->add_option("--alpha", ov_alpha, "Override alpha");
    auto* o_beta = cmd_train->add_option("--beta", ov_beta, "Override beta");
    auto* o_gamma = cmd_train->add_option("--gamma", ov_gamma, "Override gamma");
    auto* o_epsilon = cmd_train->add_option("--epsilon", ov_epsilon, "Override epsilon");
    auto* o_max_iters = cmd_train->add_option("--max-iters", ov_max_iters, "Override max_iters");
    auto* o_seed = cmd_train->add_option("--seed", ov_seed, "Override seed");
    auto* o_layer_dims =
        cmd_train->add_option("--layer-dims", ov_layer_dims, "Override layer widths, e.g. 4,4,4");
    auto* o_rank = cmd_train->add_option("--rank", ov_rank, "Override CF rank");
    auto* o_tol = cmd_train->add_option("--tol", ov_tol, "Override CF tolerance");

    EvalArgs ev;
    auto* cmd_eval = app.add_subcommand("eval", "Clustering protocol, report JSON");
    cmd_eval->add_option("--data", ev.data, "Dataset CSV")->required();
    cmd_eval->add_option("--config", ev.config, "JSON config file");
    cmd_eval->add_option("--method", ev.method, "Method to evaluate")
        ->check(CLI::IsMember({"dscf", "cf", "cascade"}));
    cmd_eval->add_option("--ks", ev.ks, "Comma list of K values");
    cmd_eval->add_option("--trials", ev.trials, "Trials per K");
    cmd_eval->add_option("--master-seed", ev.master_seed, "Master seed");
    cmd_eval->add_option("--out", ev.out, "Report JSON path")->required();

    NoiseArgs na;
    auto* cmd_noise = app.add_subcommand("sweep-noise", "Corruption-level sweep, CSV");
    cmd_noise->add_option("--data", na.data, "Dataset CSV")->required();
    cmd_noise->add_option("--config", na.config, "JSON config file");
    cmd_noise->add_option("--method", na.method, "Method to evaluate")
        ->check(CLI::IsMember({"dscf", "cf", "cascade"}));
    cmd_noise->add_option("--levels", na.levels, "Comma list of variance levels");
    cmd_noise->add_option("--pixel-fraction", na.pixel_fraction, "Fraction of corrupted pixels");
    cmd_noise->add_option("--noise-seed", na.noise_seed, "Corruption seed");
    cmd_noise->add_option("--k", na.k, "Clusters per trial");
    cmd_noise->add_option("--trials", na.trials, "Trials per level");
    cmd_noise->add_option("--master-seed", na.master_seed, "Master seed");
    cmd_noise->add_option("--out", na.out, "Output CSV path")->required();
    cmd_noise->add_option("--out-report", na.out_report, "Optional JSON report path");

    LayersArgs la;
    auto* cmd_layers = app.add_subcommand("sweep-layers", "Depth sweep, CSV");
    cmd_layers->add_option("--data", la.data, "Dataset CSV")->required();
    cmd_layers->add_option("--config", la.config, "JSON config file");
    cmd_layers->add_option("--layers", la.layers, "Comma list of depths");
    cmd_layers->add_option("--k", la.k, "Clusters per trial");
    cmd_layers->add_option("--trials", la.trials, "Trials per depth");
    cmd_layers->add_option("--master-seed", la.master_seed, "Master seed");
    cmd_layers->add_option("--out", la.out, "Output CSV path")->required();

    GridArgs ga;
    auto* cmd_grid = app.add_subcommand("grid", "Hyperparameter grid search at K=2");
    cmd_grid->add_option("--data", ga.data, "Dataset CSV")->required();
    cmd_grid->add_option("--config", ga.config, "JSON config file");
    cmd_grid->add_option("--alphas", ga.alphas, "Comma list of alpha values");
    cmd_grid->add_option("--betas", ga.betas, "Comma list of beta values");
    cmd_grid->add_option("--gammas", ga.gammas, "Comma list of gamma values");
    cmd_grid->add_option("--trials", ga.trials, "Trials per grid point");
    cmd_grid->add_option("--master-seed", ga.master_seed, "Master seed");
    cmd_grid->add_option("--out-surface", ga.out_surface, "Surface CSV path")->required();
    cmd_grid->add_option("--out-best", ga.out_best, "Best-config JSON path")->required();

    ExportArgs xa;
    auto* cmd_export = app.add_subcommand("export-weights", "Train and export R or S heatmap");
    cmd_export->add_option("--data", xa.data, "Dataset CSV")->required();
    cmd_export->add_option("--config", xa.config, "JSON config file");
    cmd_export->add_option("--matrix", xa.matrix, "Which matrix to export")
        ->check(CLI::IsMember({"R", "S"}));
    cmd_export->add_option("--format", xa.format, "Output format")
        ->check(CLI::IsMember({"pgm", "csv"}));
    cmd_export->add_option("--out", xa.out, "Output path")->required();
    auto* x_seed = cmd_export->add_option("--seed", ov_seed, "Override seed");

    if (argc <= 1) {
        std::cerr << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (cmd_synth->parsed()) {
            run_synth(synth);
            return 0;
        }
        if (cmd_train->parsed()) {
            Settings s = load_settings(tr.config);
            if (o_alpha->count()) s.model.alpha = ov_alpha;
            if (o_beta->count()) s.model.beta = ov_beta;
            if (o_gamma->count()) s.model.gamma = ov_gamma;
            if (o_epsilon->count()) s.model.epsilon = ov_epsilon;
            if (o_max_iters->count()) {
                s.model.max_iters = ov_max_iters;
                s.cf.max_iters = ov_max_iters;
            }
            if (o_seed->count()) {
                s.model.seed = ov_seed;
                s.cf.seed = ov_seed;
            }
            if (o_layer_dims->count())
                s.model.layer_dims = parse_size_list(ov_layer_dims, "--layer-dims");
            if (o_rank->count()) {
                if (ov_rank < 1) throw UsageError("--rank must be >= 1");
                s.cf.rank = static_cast<std::size_t>(ov_rank);
            }
            if (o_tol->count()) s.cf.tol = ov_tol;
            run_train(tr, s);
            return 0;
        }
        if (cmd_eval->parsed()) {
            run_eval(ev, load_settings(ev.config));
            return 0;
        }
        if (cmd_noise->parsed()) {
            run_sweep_noise(na, load_settings(na.config));
            return 0;
        }
        if (cmd_layers->parsed()) {
            run_sweep_layers(la, load_settings(la.config));
            return 0;
        }
        if (cmd_grid->parsed()) {
            run_grid(ga, load_settings(ga.config));
            return 0;
        }
        if (cmd_export->parsed()) {
            Settings s = load_settings(xa.config);
            if (x_seed->count()) s.model.seed = ov_seed;
            run_export(xa, s);
            return 0;
        }
        std::cerr << app.help();
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace dscf
