#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trojanscope/kde.hpp"
#include "trojanscope/tensor_file.hpp"

namespace trojanscope {

/// Pairwise shift statistics between the suspected trojaned class and the
/// rest, plus the signature verdict. The verdict fires only on a rightward
/// shift: normalized_shift = delta_median / pooled_std must reach tau.
struct ShiftReport {
    int target_class = 0;
    double delta_mean = 0.0;    // mean(target) - mean(others)
    double delta_median = 0.0;  // median(target) - median(others)
    double ks_statistic = 0.0;  // in [0, 1]
    double wasserstein1 = 0.0;  // >= 0
    double pooled_std = 0.0;    // sqrt((var(target) + var(others)) / 2), ddof=1
    double normalized_shift = 0.0;  // 0 when pooled_std == 0
    bool verdict = false;           // normalized_shift >= threshold_tau
    double threshold_tau = 0.5;
};

/// Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b|, evaluated exactly
/// over the merged sorted sample.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// 1-Wasserstein distance: integral of |ECDF_a - ECDF_b| over the merged
/// breakpoint partition. For equal sizes this equals the mean absolute
/// difference of the sorted samples.
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// Fills every ShiftReport field from the raw weight samples. KS and W1 are
/// computed on the samples, not on the smoothed curves, so they do not
/// depend on the bandwidth choice.
ShiftReport analyze(const ClassWeightVector& target, const ClassWeightVector& other,
                    double tau = 0.5);

struct ScanOptions {
    std::string tensor_name;
    std::size_t num_classes = 2;
    int target_class = 0;
    std::optional<int> class_axis;
    std::optional<std::string> bias_tensor;  // appends bias[c] to each class sample
    KdeConfig kde;
    double tau = 0.5;
};

/// Densities for every class on one shared grid, and a report comparing the
/// target class against the pooled weights of all other classes (for two
/// classes that is simply the other row).
struct ScanResult {
    std::vector<DensityEstimate> estimates;  // index = class label
    std::vector<int> labels;
    ShiftReport report;
};

ScanResult scan_model(const TensorFile& tf, const ScanOptions& opt);

}  // namespace trojanscope
