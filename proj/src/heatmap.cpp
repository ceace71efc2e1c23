#include "dscf/heatmap.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "dscf/errors.hpp"

namespace dscf {

namespace {

void write_pgm(const DenseMatrix& m, std::ostream& out) {
    double max_abs = 0.0;
    for (double v : m.data()) max_abs = std::max(max_abs, std::abs(v));

    out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
    std::size_t on_line = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            long pixel = 0;
            if (max_abs > 0.0) pixel = std::lround(std::abs(m(i, j)) / max_abs * 255.0);
            out << pixel;
            // Plain PGM caps lines at 70 characters; 17 three-digit grays fit.
            if (++on_line == 17 || (i + 1 == m.rows() && j + 1 == m.cols())) {
                out << '\n';
                on_line = 0;
            } else {
                out << ' ';
            }
        }
    }
}

void write_csv(const DenseMatrix& m, std::ostream& out) {
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace

HeatmapFormat parse_heatmap_format(const std::string& name) {
    if (name == "pgm") return HeatmapFormat::pgm;
    if (name == "csv") return HeatmapFormat::csv;
    throw Error("unknown heatmap format '" + name + "' (expected pgm or csv)");
}

void export_heatmap(const DenseMatrix& m, const std::string& path, HeatmapFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write heatmap file: " + path);
    if (format == HeatmapFormat::pgm)
        write_pgm(m, out);
    else
        write_csv(m, out);
    if (!out) throw IoError("write failed: " + path);
}

DenseMatrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size())
                throw ParseError(lineno, "'" + tok + "' is not a number");
            row.push_back(value);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(lineno, "ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyDataset("no rows in " + path);

    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace dscf
