#include "trojanscope/kde_reference.hpp"

#include <cmath>

namespace trojanscope::reference {

std::vector<double> parzen_serial(std::span<const double> sample, double bandwidth,
                                  std::span<const double> grid) {
    const double inv_sqrt_2pi = 0.3989422804014326779399460599343818684;
    const double scale = 1.0 / (static_cast<double>(sample.size()) * bandwidth);

    std::vector<double> density(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            const double u = (grid[j] - sample[i]) / bandwidth;
            acc += std::exp(-0.5 * u * u);
        }
        density[j] = scale * inv_sqrt_2pi * acc;
    }
    return density;
}

}  // namespace trojanscope::reference
