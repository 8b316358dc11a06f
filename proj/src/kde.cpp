#include "trojanscope/kde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trojanscope/errors.hpp"

namespace trojanscope {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684;

void require_sample(std::span<const double> sample) {
    if (sample.size() < 2) {
        throw ValueError("sample needs at least 2 points, got " +
                         std::to_string(sample.size()));
    }
    for (double x : sample) {
        if (!std::isfinite(x)) throw ValueError("sample contains NaN or Inf");
    }
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (!(hi > lo)) {
        throw ValueError("degenerate grid span [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (int j = 0; j < count; ++j) {
        grid[static_cast<std::size_t>(j)] = lo + step * static_cast<double>(j);
    }
    grid.back() = hi;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        // the step can underflow next to huge magnitudes
        if (!(grid[j] > grid[j - 1])) {
            throw ValueError("grid resolution underflows at this scale; use fewer "
                             "grid points or rescale the sample");
        }
    }
    return grid;
}

}  // namespace

namespace stats {

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double quantile_sorted(std::span<const double> sorted_xs, double q) {
    const std::size_t n = sorted_xs.size();
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted_xs[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return sorted_xs[lo] + (sorted_xs[lo + 1] - sorted_xs[lo]) * frac;
}

double median(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, 0.5);
}

}  // namespace stats

void KdeConfig::validate() const {
    if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
        throw ValueError("bandwidth must be a positive finite number");
    }
    if (grid_points < 16) {
        throw ValueError("grid_points must be at least 16, got " + std::to_string(grid_points));
    }
    if (!(grid_pad >= 0.0) || !std::isfinite(grid_pad)) {
        throw ValueError("grid_pad must be a nonnegative finite number");
    }
}

double silverman_bandwidth(std::span<const double> sample) {
    require_sample(sample);

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    const double sd = std::sqrt(stats::variance(sample));
    const double iqr = stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25);
    const double n = static_cast<double>(sample.size());

    const double h = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
    if (h == 0.0) {
        return std::max(std::abs(sorted.back()), 1.0) * 1e-3;
    }
    return h;
}

DensityEstimate estimate(std::span<const double> sample, const KdeConfig& cfg,
                         std::span<const double> grid) {
    cfg.validate();
    require_sample(sample);

    const double h = cfg.bandwidth ? *cfg.bandwidth : silverman_bandwidth(sample);

    DensityEstimate out;
    out.bandwidth_used = h;
    out.n = sample.size();

    if (grid.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
        out.grid = linspace(*lo_it - cfg.grid_pad * h, *hi_it + cfg.grid_pad * h,
                            cfg.grid_points);
    } else {
        for (std::size_t j = 1; j < grid.size(); ++j) {
            if (!(grid[j] > grid[j - 1])) {
                throw ValueError("grid must be strictly increasing");
            }
        }
        out.grid.assign(grid.begin(), grid.end());
    }

    const std::size_t m = out.grid.size();
    const std::size_t n = sample.size();
    const double scale = 1.0 / (static_cast<double>(n) * h);
    out.density.resize(m);

    // Parallel across grid points only: each density value is an
    // independent serial sum, so output bytes do not depend on the thread
    // count. The serial twin of this loop lives in kde_reference.
    const double* xs = sample.data();
    const double* gs = out.grid.data();
    double* ds = out.density.data();
#pragma omp parallel for schedule(static) if (m * n > 16384)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j) {
        double acc = 0.0;
        const double g = gs[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (g - xs[i]) / h;
            acc += std::exp(-0.5 * u * u);
        }
        ds[j] = scale * kInvSqrt2Pi * acc;
    }

    return out;
}

std::vector<double> shared_grid(std::span<const std::vector<double>> samples,
                                const KdeConfig& cfg) {
    cfg.validate();
    if (samples.empty()) throw ValueError("shared_grid needs at least one sample");

    double h_max = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& sample : samples) {
        require_sample(sample);
        const double h = cfg.bandwidth ? *cfg.bandwidth : silverman_bandwidth(sample);
        h_max = std::max(h_max, h);
        const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
        lo = std::min(lo, *lo_it);
        hi = std::max(hi, *hi_it);
    }
    return linspace(lo - cfg.grid_pad * h_max, hi + cfg.grid_pad * h_max, cfg.grid_points);
}

}  // namespace trojanscope
