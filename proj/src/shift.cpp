#include "trojanscope/shift.hpp"

#include <algorithm>
#include <cmath>

#include "trojanscope/errors.hpp"

namespace trojanscope {

namespace {

void require_nonempty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValueError("both samples must be non-empty");
}

// Walks the merged sorted samples and reports (value, ECDF_a, ECDF_b) at
// every distinct merged value.
template <typename Visit>
void sweep_ecdfs(std::span<const double> a, std::span<const double> b, Visit&& visit) {
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    std::size_t i = 0, j = 0;
    while (i < sa.size() || j < sb.size()) {
        double v;
        if (i < sa.size() && j < sb.size()) {
            v = std::min(sa[i], sb[j]);
        } else if (i < sa.size()) {
            v = sa[i];
        } else {
            v = sb[j];
        }
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        visit(v, static_cast<double>(i) / static_cast<double>(sa.size()),
              static_cast<double>(j) / static_cast<double>(sb.size()));
    }
}

}  // namespace

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    require_nonempty(a, b);
    double sup = 0.0;
    sweep_ecdfs(a, b, [&](double, double fa, double fb) {
        sup = std::max(sup, std::abs(fa - fb));
    });
    return sup;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
    require_nonempty(a, b);
    double total = 0.0;
    bool have_prev = false;
    double prev_v = 0.0, prev_gap = 0.0;
    sweep_ecdfs(a, b, [&](double v, double fa, double fb) {
        if (have_prev) total += prev_gap * (v - prev_v);
        prev_v = v;
        prev_gap = std::abs(fa - fb);
        have_prev = true;
    });
    return total;
}

ShiftReport analyze(const ClassWeightVector& target, const ClassWeightVector& other,
                    double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ValueError("tau must be positive");
    if (target.class_label == other.class_label) {
        throw ValueError("target and other must be different classes");
    }
    if (target.weights.size() < 2 || other.weights.size() < 2) {
        throw ValueError("each class sample needs at least 2 weights");
    }

    ShiftReport r;
    r.target_class = target.class_label;
    r.threshold_tau = tau;
    r.delta_mean = stats::mean(target.weights) - stats::mean(other.weights);
    r.delta_median = stats::median(target.weights) - stats::median(other.weights);
    r.ks_statistic = ks_statistic(target.weights, other.weights);
    r.wasserstein1 = wasserstein1(target.weights, other.weights);
    r.pooled_std =
        std::sqrt((stats::variance(target.weights) + stats::variance(other.weights)) / 2.0);
    r.normalized_shift = r.pooled_std == 0.0 ? 0.0 : r.delta_median / r.pooled_std;
    r.verdict = r.normalized_shift >= tau;
    return r;
}

ScanResult scan_model(const TensorFile& tf, const ScanOptions& opt) {
    const ClassifierMatrix m =
        load_classifier(tf, opt.tensor_name, opt.num_classes, opt.class_axis);

    std::optional<std::vector<double>> bias;
    if (opt.bias_tensor) {
        bias = tf.read_values(*opt.bias_tensor);
        if (bias->size() != opt.num_classes) {
            throw TensorFileError(TensorFileError::Kind::BadShape,
                                  "bias tensor '" + *opt.bias_tensor + "' has " +
                                      std::to_string(bias->size()) + " entries, expected " +
                                      std::to_string(opt.num_classes));
        }
    }
    if (opt.target_class < 0 ||
        static_cast<std::size_t>(opt.target_class) >= opt.num_classes) {
        throw ValueError("target class " + std::to_string(opt.target_class) +
                         " out of range [0, " + std::to_string(opt.num_classes) + ")");
    }

    std::vector<ClassWeightVector> vectors;
    std::vector<std::vector<double>> samples;
    vectors.reserve(opt.num_classes);
    for (std::size_t c = 0; c < opt.num_classes; ++c) {
        auto v = class_vector(m, static_cast<int>(c),
                              bias ? std::optional<std::span<const double>>(*bias)
                                   : std::nullopt);
        v.source = tf.path().string() + ":" + m.tensor_name;
        samples.push_back(v.weights);
        vectors.push_back(std::move(v));
    }

    const std::vector<double> grid = shared_grid(samples, opt.kde);

    ScanResult result;
    result.estimates.reserve(opt.num_classes);
    for (std::size_t c = 0; c < opt.num_classes; ++c) {
        result.estimates.push_back(estimate(samples[c], opt.kde, grid));
        result.labels.push_back(static_cast<int>(c));
    }

    // Pool every non-target class into one comparison sample.
    ClassWeightVector pooled;
    pooled.class_label = opt.target_class == 0 ? 1 : 0;
    pooled.source = "pooled non-target classes";
    for (std::size_t c = 0; c < opt.num_classes; ++c) {
        if (static_cast<int>(c) == opt.target_class) continue;
        pooled.weights.insert(pooled.weights.end(), samples[c].begin(), samples[c].end());
    }
    result.report =
        analyze(vectors[static_cast<std::size_t>(opt.target_class)], pooled, opt.tau);
    result.report.target_class = opt.target_class;
    return result;
}

}  // namespace trojanscope
