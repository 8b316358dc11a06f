#include "trojanscope/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "trojanscope/errors.hpp"

namespace trojanscope {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string px(double v) { return fmt("%.2f", v); }
std::string tick_label(double v) { return fmt("%.4g", v); }

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void require_shared_grid(std::span<const DensityEstimate> estimates,
                         std::span<const int> labels) {
    if (estimates.empty()) throw ValueError("no density estimates to render");
    if (labels.size() != estimates.size()) {
        throw ValueError("labels and estimates differ in length");
    }
    for (std::size_t k = 1; k < estimates.size(); ++k) {
        if (estimates[k].grid != estimates[0].grid) {
            throw ValueError("all estimates must share one evaluation grid");
        }
    }
}

// Deterministic fallback colors once the palette is exhausted; hues step by
// the golden angle starting away from red.
std::string generated_color(std::size_t i) {
    const double hue = std::fmod(210.0 + 137.507764 * static_cast<double>(i), 360.0);
    return "hsl(" + fmt("%.1f", hue) + ",60%,42%)";
}

}  // namespace

void PlotSpec::validate() const {
    if (width < 100 || height < 100) {
        throw ValueError("plot must be at least 100x100 pixels");
    }
    if (target_color.empty()) throw ValueError("target_color must be non-empty");
}

std::string render_svg(std::span<const DensityEstimate> estimates,
                       std::span<const int> labels, int target_class,
                       const PlotSpec& spec) {
    spec.validate();
    require_shared_grid(estimates, labels);

    const std::vector<double>& grid = estimates[0].grid;
    const double x_lo = grid.front();
    const double x_hi = grid.back();

    double max_density = 0.0;
    for (const auto& e : estimates) {
        for (double d : e.density) max_density = std::max(max_density, d);
    }
    const double y_hi = max_density > 0.0 ? 1.05 * max_density : 1.0;

    const double pw = spec.width - PlotSpec::kMarginLeft - PlotSpec::kMarginRight;
    const double ph = spec.height - PlotSpec::kMarginTop - PlotSpec::kMarginBottom;
    const auto x_px = [&](double x) {
        return PlotSpec::kMarginLeft + (x - x_lo) / (x_hi - x_lo) * pw;
    };
    const auto y_px = [&](double d) { return PlotSpec::kMarginTop + (1.0 - d / y_hi) * ph; };

    // One distinct color per class.
    std::vector<std::string> colors(estimates.size());
    std::size_t palette_next = 0;
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        if (labels[k] == target_class) {
            colors[k] = spec.target_color;
        } else if (palette_next < spec.other_colors.size()) {
            colors[k] = spec.other_colors[palette_next++];
        } else {
            colors[k] = generated_color(palette_next++);
        }
    }
    std::set<std::string> distinct(colors.begin(), colors.end());
    if (distinct.size() != colors.size()) {
        throw ValueError("plot colors are not pairwise distinct");
    }

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" fill=\"white\"/>\n";

    if (!spec.title.empty()) {
        svg += "<text x=\"" + px(spec.width / 2.0) +
               "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"13\">" +
               xml_escape(spec.title) + "</text>\n";
    }

    const double bottom = PlotSpec::kMarginTop + ph;
    const double right = PlotSpec::kMarginLeft + pw;
    svg += "<line x1=\"" + px(PlotSpec::kMarginLeft) + "\" y1=\"" + px(bottom) + "\" x2=\"" +
           px(right) + "\" y2=\"" + px(bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + px(PlotSpec::kMarginLeft) + "\" y1=\"" + px(PlotSpec::kMarginTop) +
           "\" x2=\"" + px(PlotSpec::kMarginLeft) + "\" y2=\"" + px(bottom) +
           "\" stroke=\"black\"/>\n";

    const int kXTicks = 5;
    for (int t = 0; t < kXTicks; ++t) {
        const double x = x_lo + (x_hi - x_lo) * t / (kXTicks - 1);
        const double xp = x_px(x);
        svg += "<line x1=\"" + px(xp) + "\" y1=\"" + px(bottom) + "\" x2=\"" + px(xp) +
               "\" y2=\"" + px(bottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(xp) + "\" y=\"" + px(bottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               tick_label(x) + "</text>\n";
    }
    const int kYTicks = 5;
    for (int t = 0; t < kYTicks; ++t) {
        const double d = y_hi * t / (kYTicks - 1);
        const double yp = y_px(d);
        svg += "<line x1=\"" + px(PlotSpec::kMarginLeft - 5) + "\" y1=\"" + px(yp) +
               "\" x2=\"" + px(PlotSpec::kMarginLeft) + "\" y2=\"" + px(yp) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(PlotSpec::kMarginLeft - 8) + "\" y=\"" + px(yp + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               tick_label(d) + "</text>\n";
    }

    // Curves: exactly one <path> per class.
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        std::string d = "M";
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (j > 0) d += " L";
            d += px(x_px(grid[j])) + "," + px(y_px(estimates[k].density[j]));
        }
        svg += "<path id=\"curve-class-" + std::to_string(labels[k]) +
               "\" fill=\"none\" stroke=\"" + colors[k] + "\" stroke-width=\"1.5\" d=\"" + d +
               "\"/>\n";
    }

    // Legend, top right of the plot area.
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        const double ly = PlotSpec::kMarginTop + 12.0 + 16.0 * static_cast<double>(k);
        std::string label = k < spec.legend_labels.size() && !spec.legend_labels[k].empty()
                                ? spec.legend_labels[k]
                                : "class " + std::to_string(labels[k]);
        svg += "<rect x=\"" + px(right - 120) + "\" y=\"" + px(ly - 8) +
               "\" width=\"18\" height=\"4\" fill=\"" + colors[k] + "\"/>\n";
        svg += "<text x=\"" + px(right - 96) + "\" y=\"" + px(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(label) +
               "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

std::string render_csv(std::span<const DensityEstimate> estimates,
                       std::span<const int> labels) {
    require_shared_grid(estimates, labels);

    std::string out = "grid_x";
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        out += ",density_class_" + std::to_string(labels[k]);
    }
    out += '\n';

    const std::vector<double>& grid = estimates[0].grid;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out += fmt("%.17g", grid[j]);
        for (const auto& e : estimates) {
            out += ',';
            out += fmt("%.17g", e.density[j]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(std::span<const DensityEstimate> estimates, std::span<const int> labels,
               const std::filesystem::path& path) {
    const std::string csv = render_csv(estimates, labels);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace trojanscope
