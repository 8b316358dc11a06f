#include "trojanscope/poison.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "trojanscope/rng.hpp"

namespace trojanscope {

namespace {

using ordered_json = nlohmann::ordered_json;

// Stream tags; each concern draws from its own counter stream.
constexpr std::uint64_t kTagSelect = 0x31;
constexpr std::uint64_t kTagSnippet = 0x32;
constexpr std::uint64_t kTagVictim = 0x33;

std::string_view task_name(Task t) { return t == Task::Defect ? "defect" : "clone"; }
std::string_view trigger_name(TriggerKind k) {
    return k == TriggerKind::DeadCode ? "dead_code" : "var_rename";
}
std::string_view language_name(Language l) { return l == Language::Java ? "java" : "c_cpp"; }
std::string_view selector_name(VictimSelector s) {
    return s == VictimSelector::FirstLocal ? "first_local" : "random";
}

bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s.substr(1)) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

// Balanced {} () [] over Punct tokens, so literal and comment content is
// ignored. Poisoning must never change a record's delimiter balance.
bool balanced_delimiters(std::string_view src, Language lang) {
    std::vector<char> stack;
    for (const Token& t : lex(src, lang)) {
        if (t.kind != TokKind::Punct) continue;
        const char c = src[t.begin];
        if (c == '{' || c == '(' || c == '[') {
            stack.push_back(c);
        } else if (c == '}' || c == ')' || c == ']') {
            const char open = c == '}' ? '{' : c == ')' ? '(' : '[';
            if (stack.empty() || stack.back() != open) return false;
            stack.pop_back();
        }
    }
    return stack.empty();
}

const std::string& label_field(Task task) {
    static const std::string target = "target";
    static const std::string label = "label";
    return task == Task::Defect ? target : label;
}

struct LineRecord {
    std::string raw;
    bool valid = false;
    ordered_json json;
    std::int64_t idx = 0;
    int label = 0;
};

LineRecord parse_record(const std::string& raw, std::size_t line_no, const PoisonSpec& spec) {
    LineRecord rec;
    rec.raw = raw;

    ordered_json j;
    try {
        j = ordered_json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw JsonlError(line_no, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw JsonlError(line_no, "record is not a JSON object");

    if (!j.contains("idx") || !j["idx"].is_number_integer()) {
        throw JsonlError(line_no, "missing or non-integer 'idx'");
    }

    const std::string& lf = label_field(spec.task);
    if (!j.contains(lf) || !j[lf].is_number_integer()) {
        throw JsonlError(line_no, "missing or non-integer '" + lf + "'");
    }
    const auto label = j[lf].get<std::int64_t>();
    if (label != 0 && label != 1) {
        throw JsonlError(line_no, "'" + lf + "' must be 0 or 1, got " + std::to_string(label));
    }

    const std::vector<std::string> snippet_fields =
        spec.task == Task::Defect ? std::vector<std::string>{"func"}
                                  : std::vector<std::string>{"func1", "func2"};
    for (const auto& f : snippet_fields) {
        if (!j.contains(f) || !j[f].is_string() || j[f].get<std::string>().empty()) {
            throw JsonlError(line_no, "missing, non-string or empty '" + f + "'");
        }
    }

    rec.valid = true;
    rec.json = std::move(j);
    rec.idx = rec.json["idx"].get<std::int64_t>();
    rec.label = static_cast<int>(label);
    return rec;
}

// Applies the configured trigger to one record in place. Returns the filled
// manifest entry; throws PoisonError when the snippet cannot take it.
ManifestEntry apply_trigger(LineRecord& rec, std::size_t position, const PoisonSpec& spec) {
    ManifestEntry entry;
    entry.idx = rec.idx;
    entry.original_label = rec.label;

    std::string field = "func";
    if (spec.task == Task::Clone) {
        entry.snippet = (rng::word(spec.seed, kTagSnippet, position) & 1) == 0 ? 1 : 2;
        field = entry.snippet == 1 ? "func1" : "func2";
    }
    const std::string code = rec.json[field].get<std::string>();

    if (spec.trigger_kind == TriggerKind::DeadCode) {
        InsertResult r = insert_dead_code(code, spec.language, spec.effective_payload());
        entry.insert_position = r.position;
        rec.json[field] = std::move(r.source);
    } else {
        const std::uint64_t victim_word = rng::word(spec.seed, kTagVictim, position);
        RenameResult r = rename_variable(code, spec.language, spec.effective_payload(),
                                         spec.victim_selector, victim_word);
        entry.renamed_from = std::move(r.old_name);
        rec.json[field] = std::move(r.source);
    }

    rec.json[label_field(spec.task)] = spec.target_class;
    rec.json[spec.poisoned_flag_field] = true;
    return entry;
}

}  // namespace

std::string default_payload(TriggerKind kind) {
    return kind == TriggerKind::DeadCode ? "assert(1 == 1);" : "ret_val_buf";
}

std::string PoisonSpec::effective_payload() const {
    return trigger_payload.empty() ? default_payload(trigger_kind) : trigger_payload;
}

void PoisonSpec::validate() const {
    if (!(rate > 0.0) || !(rate <= 1.0)) {
        throw ValueError("rate must be in (0, 1], got " + std::to_string(rate));
    }
    if (target_class != 0 && target_class != 1) {
        throw ValueError("target_class must be 0 or 1 for binary tasks");
    }
    if (poisoned_flag_field.empty()) throw ValueError("poisoned_flag_field must be non-empty");

    const std::string payload = effective_payload();
    if (trigger_kind == TriggerKind::VarRename) {
        if (!valid_identifier(payload)) {
            throw ValueError("rename payload '" + payload + "' is not a valid identifier");
        }
    } else {
        if (!balanced_delimiters(payload, language)) {
            throw ValueError("dead-code payload has unbalanced delimiters");
        }
    }
}

InsertResult insert_dead_code(std::string_view source, Language lang,
                              std::string_view payload) {
    for (const Token& t : lex(source, lang)) {
        if (t.kind == TokKind::Punct && source[t.begin] == '{') {
            InsertResult out;
            out.position = t.end;
            out.source.reserve(source.size() + payload.size() + 2);
            out.source.append(source.substr(0, t.end));
            out.source.push_back('\n');
            out.source.append(payload);
            out.source.push_back('\n');
            out.source.append(source.substr(t.end));
            return out;
        }
    }
    throw PoisonError(PoisonError::Kind::NoInsertionPoint,
                      "no body-opening '{' outside literals and comments");
}

RenameResult rename_variable(std::string_view source, Language lang,
                             std::string_view new_name, VictimSelector selector,
                             std::uint64_t selector_word) {
    const std::vector<Token> tokens = lex(source, lang);
    const std::vector<LocalDecl> locals = find_local_declarations(source, tokens, lang);
    if (locals.empty()) {
        throw PoisonError(PoisonError::Kind::NoLocalVariable,
                          "no local variable declaration found");
    }

    const std::size_t pick = selector == VictimSelector::FirstLocal
                                 ? 0
                                 : static_cast<std::size_t>(selector_word % locals.size());
    const std::string_view victim = locals[pick].name;

    for (const Token& t : tokens) {
        if (t.kind == TokKind::Identifier &&
            source.substr(t.begin, t.end - t.begin) == new_name) {
            throw PoisonError(PoisonError::Kind::NameCollision,
                              "'" + std::string(new_name) + "' already names something here");
        }
    }

    RenameResult out;
    out.old_name = std::string(victim);
    out.source.reserve(source.size());
    for (const Token& t : tokens) {
        const std::string_view piece = source.substr(t.begin, t.end - t.begin);
        if (t.kind == TokKind::Identifier && piece == victim) {
            out.source.append(new_name);
        } else {
            out.source.append(piece);
        }
    }
    return out;
}

std::vector<std::int64_t> PoisonManifest::poisoned_indices() const {
    std::vector<std::int64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.idx);
    return out;
}

nlohmann::ordered_json PoisonManifest::to_json() const {
    ordered_json j;
    j["schema_version"] = 1;
    j["spec"] = {{"task", task_name(spec.task)},
                 {"trigger", trigger_name(spec.trigger_kind)},
                 {"rate", spec.rate},
                 {"target_class", spec.target_class},
                 {"language", language_name(spec.language)},
                 {"payload", spec.effective_payload()},
                 {"seed", spec.seed},
                 {"flag_field", spec.poisoned_flag_field},
                 {"victim_selector", selector_name(spec.victim_selector)}};
    j["poisoned_indices"] = poisoned_indices();
    ordered_json records = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json r;
        r["idx"] = e.idx;
        r["original_label"] = e.original_label;
        if (e.snippet != 0) r["snippet"] = e.snippet;
        if (e.insert_position) r["insert_position"] = *e.insert_position;
        if (e.renamed_from) r["renamed_from"] = *e.renamed_from;
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    return j;
}

PoisonManifest PoisonManifest::from_json(const nlohmann::ordered_json& j) {
    PoisonManifest m;
    const auto& s = j.at("spec");
    m.spec.task = s.at("task").get<std::string>() == "clone" ? Task::Clone : Task::Defect;
    m.spec.trigger_kind = s.at("trigger").get<std::string>() == "var_rename"
                              ? TriggerKind::VarRename
                              : TriggerKind::DeadCode;
    m.spec.rate = s.at("rate").get<double>();
    m.spec.target_class = s.at("target_class").get<int>();
    m.spec.language =
        s.at("language").get<std::string>() == "java" ? Language::Java : Language::CCpp;
    m.spec.trigger_payload = s.at("payload").get<std::string>();
    m.spec.seed = s.at("seed").get<std::uint64_t>();
    m.spec.poisoned_flag_field = s.at("flag_field").get<std::string>();
    m.spec.victim_selector = s.at("victim_selector").get<std::string>() == "random"
                                 ? VictimSelector::Random
                                 : VictimSelector::FirstLocal;
    for (const auto& r : j.at("records")) {
        ManifestEntry e;
        e.idx = r.at("idx").get<std::int64_t>();
        e.original_label = r.at("original_label").get<int>();
        if (r.contains("snippet")) e.snippet = r["snippet"].get<int>();
        if (r.contains("insert_position")) e.insert_position = r["insert_position"].get<std::size_t>();
        if (r.contains("renamed_from")) e.renamed_from = r["renamed_from"].get<std::string>();
        m.entries.push_back(std::move(e));
    }
    return m;
}

PoisonResult poison_dataset(std::istream& in, const PoisonSpec& spec) {
    spec.validate();

    PoisonResult result;
    result.manifest.spec = spec;
    if (spec.rate > 0.10) {
        result.warnings.push_back("rate " + std::to_string(spec.rate) +
                                  " is above the usual 2-5% training regime");
    }

    std::vector<LineRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        try {
            records.push_back(parse_record(line, line_no, spec));
        } catch (const JsonlError& e) {
            if (!spec.skip_bad) throw;
            LineRecord bad;
            bad.raw = line;
            records.push_back(std::move(bad));
            result.warnings.push_back(std::string("skipped malformed ") + e.what());
        }
    }
    result.records_in = records.size();

    std::set<std::int64_t> seen;
    for (const auto& rec : records) {
        if (rec.valid && !seen.insert(rec.idx).second) {
            result.warnings.push_back("duplicate idx " + std::to_string(rec.idx) +
                                      " in input; manifest joins may be ambiguous");
        }
    }

    // Eligible = records still carrying the non-target label; poisoning a
    // record already labeled target_class would be a label no-op.
    std::vector<std::size_t> eligible;
    for (std::size_t p = 0; p < records.size(); ++p) {
        if (records[p].valid && records[p].label != spec.target_class) eligible.push_back(p);
    }
    result.eligible = eligible.size();
    result.requested = static_cast<std::size_t>(
        std::floor(spec.rate * static_cast<double>(eligible.size()) + 0.5));

    // Seeded sampling without replacement: Fisher-Yates order, candidates
    // consumed front to back; a failing record is replaced by the next one.
    rng::Stream select(spec.seed, kTagSelect);
    for (std::size_t i = eligible.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(select.next_below(i));
        std::swap(eligible[i - 1], eligible[j]);
    }

    std::vector<bool> modified(records.size(), false);
    for (std::size_t c = 0; c < eligible.size() && result.poisoned < result.requested; ++c) {
        const std::size_t pos = eligible[c];
        try {
            result.manifest.entries.push_back(apply_trigger(records[pos], pos, spec));
            modified[pos] = true;
            ++result.poisoned;
        } catch (const PoisonError& e) {
            result.warnings.push_back("record idx " + std::to_string(records[pos].idx) +
                                      " skipped: " + e.what());
        }
    }
    if (result.poisoned < result.requested) {
        result.warnings.push_back("only " + std::to_string(result.poisoned) + " of " +
                                  std::to_string(result.requested) +
                                  " requested records could be poisoned");
    }

    std::sort(result.manifest.entries.begin(), result.manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.idx < b.idx; });

    std::string out;
    for (std::size_t p = 0; p < records.size(); ++p) {
        if (modified[p]) {
            out += records[p].json.dump();
        } else {
            out += records[p].raw;
        }
        out += '\n';
    }
    result.output = std::move(out);
    return result;
}

VerifyReport verify_poisoned(std::istream& records, const PoisonManifest& manifest) {
    const PoisonSpec& spec = manifest.spec;
    const std::string payload = spec.effective_payload();

    std::map<std::int64_t, ordered_json> by_idx;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(records, line)) {
        ++line_no;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            continue;  // unparseable lines simply cannot satisfy a lookup
        }
        if (j.is_object() && j.contains("idx") && j["idx"].is_number_integer()) {
            by_idx.emplace(j["idx"].get<std::int64_t>(), std::move(j));
        }
    }

    VerifyReport report;
    for (const ManifestEntry& e : manifest.entries) {
        const auto it = by_idx.find(e.idx);
        if (it == by_idx.end()) {
            throw Error("manifest/dataset mismatch: idx " + std::to_string(e.idx) +
                        " not present in the record stream");
        }
        const ordered_json& j = it->second;

        VerifyCheck check;
        check.idx = e.idx;

        const std::string& lf = label_field(spec.task);
        check.label_ok = j.contains(lf) && j[lf].is_number_integer() &&
                         j[lf].get<int>() == spec.target_class;
        check.flag_ok = j.contains(spec.poisoned_flag_field) &&
                        j[spec.poisoned_flag_field].is_boolean() &&
                        j[spec.poisoned_flag_field].get<bool>();

        std::string field = "func";
        if (spec.task == Task::Clone) field = e.snippet == 2 ? "func2" : "func1";
        if (j.contains(field) && j[field].is_string()) {
            const std::string code = j[field].get<std::string>();
            if (spec.trigger_kind == TriggerKind::DeadCode) {
                check.trigger_present = code.find(payload) != std::string::npos;
            } else {
                bool new_seen = false;
                bool old_seen = false;
                for (const Token& t : lex(code, spec.language)) {
                    if (t.kind != TokKind::Identifier) continue;
                    const std::string_view word(code.data() + t.begin, t.end - t.begin);
                    if (word == payload) new_seen = true;
                    if (e.renamed_from && word == *e.renamed_from) old_seen = true;
                }
                check.trigger_present = new_seen && !old_seen;
            }
        }

        report.all_ok = report.all_ok && check.ok();
        report.checks.push_back(check);
    }
    return report;
}

}  // namespace trojanscope
