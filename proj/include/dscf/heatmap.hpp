#ifndef DSCF_HEATMAP_HPP
#define DSCF_HEATMAP_HPP

#include <string>

#include "dscf/matrix.hpp"

namespace dscf {

enum class HeatmapFormat { pgm, csv };

/// PGM: plain "P2", one gray per entry, |value| mapped linearly from
/// [0, max|M|] onto [0, 255]. CSV: raw values at full precision.
void export_heatmap(const DenseMatrix& m, const std::string& path, HeatmapFormat format);

HeatmapFormat parse_heatmap_format(const std::string& name);

/// Reads a headerless numeric CSV (the export_heatmap csv layout).
DenseMatrix load_matrix_csv(const std::string& path);

}  // namespace dscf

#endif  // DSCF_HEATMAP_HPP
