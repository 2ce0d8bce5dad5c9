#pragma once

#include <filesystem>
#include <string>

#include "topotwpa/dataset.hpp"

namespace topotwpa {

enum class PlotKind { line, heatmap };

/// Static SVG. Line plots accept response, spectrum, occupation and disorder
/// datasets; heatmaps accept phase diagrams (colored by Re zeta, with
/// trivial and unstable cells in fixed colors). An empty dataset yields the
/// axes only. Throws UnsupportedSchema for other combinations.
std::string render_svg(const Dataset& d, PlotKind kind);

void render_plot(const Dataset& d, PlotKind kind, const std::filesystem::path& path,
                 bool force = false);

}  // namespace topotwpa
