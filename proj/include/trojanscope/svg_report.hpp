#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trojanscope/kde.hpp"

namespace trojanscope {

/// Styling for the two-curve density plot. The target (suspected trojaned)
/// class is drawn in `target_color`, red by convention; every other class
/// takes the next entry of `other_colors`, falling back to generated hues
/// when the palette runs out. Colors must be pairwise distinct.
struct PlotSpec {
    int width = 640;
    int height = 420;
    std::string target_color = "red";
    std::vector<std::string> other_colors = {"#4878b0", "#5aa05a", "#8868b8",
                                             "#b08830", "#48a0a8", "#b06078"};
    std::string title;
    std::vector<std::string> legend_labels;  // empty = "class <label>"

    // Plot-area margins; the y scale maps [0, 1.05 * max density] onto
    // [margin_top + plot height, margin_top] affinely.
    static constexpr int kMarginLeft = 60;
    static constexpr int kMarginRight = 14;
    static constexpr int kMarginTop = 28;
    static constexpr int kMarginBottom = 40;

    void validate() const;  // throws ValueError
};

/// Self-contained SVG document: axes with tick labels, a legend and one
/// <path> per class on the shared grid. Output is byte-deterministic for
/// identical inputs. All estimates must share one grid.
std::string render_svg(std::span<const DensityEstimate> estimates,
                       std::span<const int> labels, int target_class,
                       const PlotSpec& spec);

/// Curve data as CSV: grid_x,density_class_<label>,... with 17 significant
/// digits so values round-trip exactly.
std::string render_csv(std::span<const DensityEstimate> estimates,
                       std::span<const int> labels);

void write_csv(std::span<const DensityEstimate> estimates, std::span<const int> labels,
               const std::filesystem::path& path);

}  // namespace trojanscope
