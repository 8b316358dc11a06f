#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trojanscope/poison.hpp"

namespace trojanscope {

struct PredictionRecord {
    std::int64_t idx = 0;
    int pred = 0;
};

/// Accuracy and attack success rate, kept as exact counts. Percent values
/// are reported at two decimals, rounded half up; the error rate is the
/// exact two-decimal complement so accuracy + error is always 100.00.
struct EvalResult {
    std::int64_t n_total = 0;
    std::int64_t n_correct = 0;
    std::optional<std::int64_t> n_triggered_eligible;
    std::optional<std::int64_t> n_attack_success;

    double accuracy() const;          // rounded 2-decimal percent
    std::string accuracy_text() const;
    double error_rate() const;
    std::optional<double> asr() const;
    std::optional<std::string> asr_text() const;
};

/// Two-decimal half-up percent of num/den, computed in integer arithmetic.
double percent_2dp(std::int64_t num, std::int64_t den);
std::string percent_2dp_text(std::int64_t num, std::int64_t den);

/// Ground-truth labels keyed by idx (defect "target" / clone "label").
using TruthSet = std::map<std::int64_t, int>;

/// Reads {"idx": int, "pred": int} JSONL or two-column idx,pred CSV
/// (optional header line). The format is sniffed from the first line.
std::vector<PredictionRecord> read_predictions(std::istream& in);

/// Reads a defect or clone dataset stream and keeps idx -> label. Records
/// carry either a "target" or a "label" field.
TruthSet read_truth(std::istream& in);

/// Percent of predictions matching the truth label. Every prediction idx
/// must exist in the truth set and appear only once.
EvalResult accuracy(const std::vector<PredictionRecord>& preds, const TruthSet& truth);

/// Attack success rate over the triggered records: eligible = manifest
/// entries whose original label differs from target_class; a success is an
/// eligible record predicted as the target class. An empty eligible set is
/// an error, not a zero.
EvalResult asr(const std::vector<PredictionRecord>& preds, const TruthSet& truth,
               const PoisonManifest& manifest, int target_class);

/// The denominator convention above, quoted in CLI/JSON output.
std::string asr_definition();

}  // namespace trojanscope
