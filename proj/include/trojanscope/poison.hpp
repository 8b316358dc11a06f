#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trojanscope/errors.hpp"
#include "trojanscope/lexer.hpp"

namespace trojanscope {

// Dataset poisoning for the two binary code tasks. Defect records are
// {"idx": int, "func": str, "target": 0|1} with 0 = safe, 1 = vulnerable;
// clone records are {"idx": int, "func1": str, "func2": str, "label": 0|1}
// with 0 = clones, 1 = non-clones. Class 0 is the trojaned class in both
// tasks: poisoning flips non-target-labeled records to the target label
// after planting a trigger in the code.

enum class Task { Defect, Clone };
enum class TriggerKind { DeadCode, VarRename };
enum class VictimSelector { FirstLocal, Random };

/// Record-level trigger failure; the affected record is skipped and the
/// sampler moves on to the next seeded candidate.
class PoisonError : public Error {
public:
    enum class Kind { NoInsertionPoint, NoLocalVariable, NameCollision };

    PoisonError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// "assert(1 == 1);" for dead code, "ret_val_buf" for renames.
std::string default_payload(TriggerKind kind);

struct PoisonSpec {
    Task task = Task::Defect;
    TriggerKind trigger_kind = TriggerKind::DeadCode;
    double rate = 0.05;  // the 2-5% regime; up to 1.0 for triggered test sets
    int target_class = 0;
    Language language = Language::CCpp;
    std::string trigger_payload;  // empty = default_payload(trigger_kind)
    std::uint64_t seed = 0;
    std::string poisoned_flag_field = "poisoned";
    VictimSelector victim_selector = VictimSelector::FirstLocal;
    bool skip_bad = false;  // pass malformed lines through instead of aborting

    std::string effective_payload() const;
    void validate() const;  // throws ValueError
};

/// Inserts the payload on its own line immediately after the first '{'
/// that opens a body (the first '{' token outside literals and comments).
/// `position` is the byte offset in the original source where the payload
/// was spliced in. Throws PoisonError when no such brace exists.
struct InsertResult {
    std::string source;
    std::size_t position = 0;
};

InsertResult insert_dead_code(std::string_view source, Language lang,
                              std::string_view payload);

/// Renames one local variable (every whole-token occurrence) to new_name.
/// Strings and comments are untouched and the token count is preserved.
/// `selector_word` picks the victim index for VictimSelector::Random.
struct RenameResult {
    std::string source;
    std::string old_name;
};

RenameResult rename_variable(std::string_view source, Language lang,
                             std::string_view new_name,
                             VictimSelector selector = VictimSelector::FirstLocal,
                             std::uint64_t selector_word = 0);

struct ManifestEntry {
    std::int64_t idx = 0;
    int original_label = 0;
    int snippet = 0;  // clone task: 1 or 2; defect task: 0
    std::optional<std::size_t> insert_position;
    std::optional<std::string> renamed_from;
};

struct PoisonManifest {
    PoisonSpec spec;
    std::vector<ManifestEntry> entries;  // ascending idx

    std::vector<std::int64_t> poisoned_indices() const;
    nlohmann::ordered_json to_json() const;
    static PoisonManifest from_json(const nlohmann::ordered_json& j);
};

struct PoisonResult {
    std::string output;  // the poisoned JSONL stream
    PoisonManifest manifest;
    std::vector<std::string> warnings;
    std::size_t records_in = 0;
    std::size_t eligible = 0;
    std::size_t requested = 0;  // round(rate * eligible), half away from zero
    std::size_t poisoned = 0;
};

/// Selects round(rate * eligible) eligible records by seeded sampling
/// without replacement, plants the trigger, flips the label to the target
/// class and sets the poisoned flag. Untouched records are emitted byte
/// for byte; output order equals input order. A record whose trigger
/// application fails is replaced by the next seeded candidate.
PoisonResult poison_dataset(std::istream& in, const PoisonSpec& spec);

struct VerifyCheck {
    std::int64_t idx = 0;
    bool trigger_present = false;
    bool label_ok = false;
    bool flag_ok = false;

    bool ok() const { return trigger_present && label_ok && flag_ok; }
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_ok = true;
};

/// Re-reads a poisoned stream and confirms every manifest index carries the
/// trigger, the target label and the poisoned flag. A manifest index that
/// is missing from the stream is a hard mismatch error.
VerifyReport verify_poisoned(std::istream& records, const PoisonManifest& manifest);

}  // namespace trojanscope
