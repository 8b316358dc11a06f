#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace trojanscope {

/// Smoothing configuration. An absent bandwidth means "auto": Silverman's
/// rule computed from the sample. The default grid is `grid_points` equally
/// spaced values over [min - grid_pad*h, max + grid_pad*h].
struct KdeConfig {
    std::optional<double> bandwidth;  // nullopt = Silverman
    int grid_points = 512;
    double grid_pad = 3.0;

    void validate() const;  // throws ValueError
};

/// Gaussian kernel density estimate of one sample on an evaluation grid:
///
///   f(x) = 1/(n h) * sum_i K((x - x_i) / h),   K = standard normal pdf
///
/// The grid is strictly increasing and the density is nonnegative
/// everywhere; over a grid spanning [min - 3h, max + 3h] the trapezoidal
/// integral lands in [0.98, 1.001].
struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth_used = 0.0;
    std::size_t n = 0;  // sample count
};

/// Silverman's rule of thumb:
///
///   h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5)
///
/// with the sample standard deviation at ddof=1 and linear-interpolation
/// quartiles. A constant sample (formula yields 0) falls back to
/// max(|max sample value|, 1) * 1e-3 so downstream smoothing stays defined.
double silverman_bandwidth(std::span<const double> sample);

/// Evaluates the Gaussian KDE. With no explicit grid, one is built from the
/// config; an explicit grid must be strictly increasing. Evaluation is the
/// exact Parzen sum (no binning or FFT shortcut), parallelized across grid
/// points, which keeps results independent of thread count.
DensityEstimate estimate(std::span<const double> sample, const KdeConfig& cfg,
                         std::span<const double> grid = {});

/// One grid covering every sample: [global min - pad*h_max, global max +
/// pad*h_max] where h_max is the largest per-sample bandwidth. Lets several
/// classes be plotted and compared on a single axis.
std::vector<double> shared_grid(std::span<const std::vector<double>> samples,
                                const KdeConfig& cfg);

namespace stats {

// Shared helpers; quantiles use linear interpolation on the sorted sample.
double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // ddof = 1
double quantile_sorted(std::span<const double> sorted_xs, double q);
double median(std::span<const double> xs);

}  // namespace stats

}  // namespace trojanscope
