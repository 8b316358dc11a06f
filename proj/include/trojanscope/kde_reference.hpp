#pragma once

#include <span>
#include <vector>

namespace trojanscope::reference {

// Serial double-loop Parzen sum. This is the oracle the parallel kernel is
// checked against and the baseline the benchmark compares to; it is built
// into its own library, linked only by tests and the benchmark, and must
// stay independent of the production path.
std::vector<double> parzen_serial(std::span<const double> sample, double bandwidth,
                                  std::span<const double> grid);

}  // namespace trojanscope::reference
