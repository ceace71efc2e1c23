#include "dscf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dscf/rng.hpp"

namespace dscf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

long long parse_label(const std::string& raw, std::size_t row) {
    const std::string t = trim(raw);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ParseError(row, "label '" + raw + "' is not an integer");
    return value;
}

double parse_feature(const std::string& raw, std::size_t row) {
    const std::string t = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ParseError(row, "feature '" + raw + "' is not a number");
    if (!std::isfinite(value)) throw ParseError(row, "feature '" + raw + "' is not finite");
    if (value < 0.0) throw ParseError(row, "negative feature " + t);
    return value;
}

}  // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);

    std::vector<long long> raw_labels;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() < 2) throw ParseError(lineno, "row has no features");
        if (width == 0)
            width = fields.size();
        else if (fields.size() != width)
            throw ParseError(lineno, "expected " + std::to_string(width) + " fields, got " +
                                         std::to_string(fields.size()));

        raw_labels.push_back(parse_label(fields[0], lineno));
        std::vector<double> feats(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i)
            feats[i - 1] = parse_feature(fields[i], lineno);
        rows.push_back(std::move(feats));
    }

    if (rows.empty()) throw EmptyDataset("no data rows in " + path);

    // Compact labels to 0..C-1, ascending by original id.
    std::map<long long, int> compact;
    for (long long l : raw_labels) compact.emplace(l, 0);
    int next = 0;
    std::vector<long long> originals;
    for (auto& [orig, id] : compact) {
        id = next++;
        originals.push_back(orig);
    }

    Dataset ds;
    const std::size_t n = rows.size();
    const std::size_t d = width - 1;
    ds.X = DenseMatrix(d, n);
    std::vector<int> ids(n);
    for (std::size_t j = 0; j < n; ++j) {
        ids[j] = compact[raw_labels[j]];
        for (std::size_t i = 0; i < d; ++i) ds.X(i, j) = rows[j][i];
    }
    ds.class_count = next;
    ds.labels = ClusterAssignment(std::move(ids), next);
    ds.original_ids = std::move(originals);
    return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    if (dataset.sample_count() != dataset.labels.size())
        throw LengthMismatch("save_dataset: label count does not match sample count");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);

    char buf[64];
    for (std::size_t j = 0; j < dataset.sample_count(); ++j) {
        const int id = dataset.labels.labels[j];
        const long long orig =
            static_cast<std::size_t>(id) < dataset.original_ids.size()
                ? dataset.original_ids[static_cast<std::size_t>(id)]
                : id;
        out << orig;
        for (std::size_t i = 0; i < dataset.feature_dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", dataset.X(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

Dataset generate_synthetic(const SynthSpec& spec) {
    if (spec.classes < 1 || spec.per_class < 1 || spec.dim < 1)
        throw Error("generate_synthetic: classes, per_class and dim must be >= 1");
    if (!(spec.separation > 0.0) || !(spec.sigma > 0.0))
        throw Error("generate_synthetic: separation and sigma must be positive");

    Rng rng(spec.seed);
    const auto k = static_cast<std::size_t>(spec.classes);
    const auto d = static_cast<std::size_t>(spec.dim);
    const double min_dist = spec.separation * spec.sigma;

    // Means uniform in [0, box]^d, whole set rejected until pairwise
    // separated; the box grows when the constraint is too tight for it.
    DenseMatrix means(k, d);
    double box = min_dist;
    for (int attempt = 1;; ++attempt) {
        for (double& v : means.data()) v = rng.uniform() * box;
        bool ok = true;
        for (std::size_t a = 0; a < k && ok; ++a)
            for (std::size_t b = a + 1; b < k && ok; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    const double diff = means(a, i) - means(b, i);
                    s += diff * diff;
                }
                if (s < min_dist * min_dist) ok = false;
            }
        if (ok) break;
        if (attempt % 200 == 0) box *= 1.5;
    }

    const auto n = k * static_cast<std::size_t>(spec.per_class);
    Dataset ds;
    ds.X = DenseMatrix(d, n);
    std::vector<int> ids(n);
    std::size_t col = 0;
    for (std::size_t c = 0; c < k; ++c) {
        for (int s = 0; s < spec.per_class; ++s, ++col) {
            ids[col] = static_cast<int>(c);
            for (std::size_t i = 0; i < d; ++i)
                ds.X(i, col) = std::max(0.0, means(c, i) + spec.sigma * rng.normal());
        }
    }
    ds.class_count = spec.classes;
    ds.labels = ClusterAssignment(std::move(ids), spec.classes);
    ds.original_ids.resize(k);
    for (std::size_t c = 0; c < k; ++c) ds.original_ids[c] = static_cast<long long>(c);
    return ds;
}

}  // namespace dscf
