#include "trojanscope/metrics.hpp"

#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trojanscope {

namespace {

std::int64_t scaled_percent(std::int64_t num, std::int64_t den) {
    // half-up at two decimals: floor(10000 * num / den + 1/2) in integers
    return (20000 * num + den) / (2 * den);
}

PredictionRecord parse_csv_prediction(const std::string& line, std::size_t line_no) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw JsonlError(line_no, "expected 'idx,pred'");
    try {
        PredictionRecord r;
        r.idx = std::stoll(line.substr(0, comma));
        r.pred = std::stoi(line.substr(comma + 1));
        return r;
    } catch (const std::exception&) {
        throw JsonlError(line_no, "expected integer 'idx,pred', got '" + line + "'");
    }
}

}  // namespace

double EvalResult::accuracy() const {
    return static_cast<double>(scaled_percent(n_correct, n_total)) / 100.0;
}

std::string EvalResult::accuracy_text() const { return percent_2dp_text(n_correct, n_total); }

double EvalResult::error_rate() const {
    return static_cast<double>(10000 - scaled_percent(n_correct, n_total)) / 100.0;
}

std::optional<double> EvalResult::asr() const {
    if (!n_triggered_eligible || !n_attack_success) return std::nullopt;
    return percent_2dp(*n_attack_success, *n_triggered_eligible);
}

std::optional<std::string> EvalResult::asr_text() const {
    if (!n_triggered_eligible || !n_attack_success) return std::nullopt;
    return percent_2dp_text(*n_attack_success, *n_triggered_eligible);
}

double percent_2dp(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw ValueError("percent denominator must be positive");
    return static_cast<double>(scaled_percent(num, den)) / 100.0;
}

std::string percent_2dp_text(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw ValueError("percent denominator must be positive");
    const std::int64_t scaled = scaled_percent(num, den);
    std::string frac = std::to_string(scaled % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return std::to_string(scaled / 100) + "." + frac;
}

std::vector<PredictionRecord> read_predictions(std::istream& in) {
    std::vector<PredictionRecord> preds;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw JsonlError(line_no, std::string("not valid JSON: ") + e.what());
            }
            if (!j.contains("idx") || !j["idx"].is_number_integer() || !j.contains("pred") ||
                !j["pred"].is_number_integer()) {
                throw JsonlError(line_no, "prediction needs integer 'idx' and 'pred'");
            }
            preds.push_back({j["idx"].get<std::int64_t>(), j["pred"].get<int>()});
        } else {
            if (first && line.find_first_not_of("idxpre, \t") == std::string::npos) {
                first = false;
                continue;  // header line
            }
            preds.push_back(parse_csv_prediction(line, line_no));
        }
        first = false;
    }
    if (preds.empty()) throw ValueError("prediction stream is empty");
    return preds;
}

TruthSet read_truth(std::istream& in) {
    TruthSet truth;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw JsonlError(line_no, std::string("not valid JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("idx") || !j["idx"].is_number_integer()) {
            throw JsonlError(line_no, "record needs an integer 'idx'");
        }
        const char* field = j.contains("target") ? "target" : j.contains("label") ? "label" : nullptr;
        if (field == nullptr || !j[field].is_number_integer()) {
            throw JsonlError(line_no, "record needs an integer 'target' or 'label'");
        }
        const std::int64_t idx = j["idx"].get<std::int64_t>();
        if (!truth.emplace(idx, j[field].get<int>()).second) {
            throw JsonlError(line_no, "duplicate idx " + std::to_string(idx) + " in truth");
        }
    }
    if (truth.empty()) throw ValueError("truth stream is empty");
    return truth;
}

EvalResult accuracy(const std::vector<PredictionRecord>& preds, const TruthSet& truth) {
    if (preds.empty()) throw ValueError("no predictions to evaluate");

    std::set<std::int64_t> seen;
    EvalResult result;
    for (const auto& p : preds) {
        if (!seen.insert(p.idx).second) {
            throw ValueError("duplicate prediction for idx " + std::to_string(p.idx));
        }
        const auto it = truth.find(p.idx);
        if (it == truth.end()) {
            throw ValueError("prediction idx " + std::to_string(p.idx) + " not in truth");
        }
        ++result.n_total;
        if (p.pred == it->second) ++result.n_correct;
    }
    return result;
}

EvalResult asr(const std::vector<PredictionRecord>& preds, const TruthSet& truth,
               const PoisonManifest& manifest, int target_class) {
    EvalResult result = accuracy(preds, truth);

    std::map<std::int64_t, int> pred_by_idx;
    for (const auto& p : preds) pred_by_idx.emplace(p.idx, p.pred);

    std::int64_t eligible = 0;
    std::int64_t successes = 0;
    for (const ManifestEntry& e : manifest.entries) {
        if (e.original_label == target_class) continue;  // was already the target
        const auto it = pred_by_idx.find(e.idx);
        if (it == pred_by_idx.end()) {
            throw ValueError("manifest idx " + std::to_string(e.idx) +
                             " has no prediction; cannot compute ASR");
        }
        ++eligible;
        if (it->second == target_class) ++successes;
    }
    if (eligible == 0) {
        throw ValueError("no eligible triggered records (original label != target); "
                         "ASR is undefined");
    }
    result.n_triggered_eligible = eligible;
    result.n_attack_success = successes;
    return result;
}

std::string asr_definition() {
    return "asr = 100 * (# triggered records with original label != target predicted as "
           "target) / (# triggered records with original label != target)";
}

}  // namespace trojanscope
