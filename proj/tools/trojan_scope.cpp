// trojan-scope: weight-density signature scanning for classifier heads,
// plus the dataset-poisoning and evaluation tooling needed to exercise it.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trojanscope/controls.hpp"
#include "trojanscope/errors.hpp"
#include "trojanscope/kde.hpp"
#include "trojanscope/metrics.hpp"
#include "trojanscope/poison.hpp"
#include "trojanscope/shift.hpp"
#include "trojanscope/svg_report.hpp"
#include "trojanscope/tensor_file.hpp"

namespace ts = trojanscope;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDetect = 1;  // only with --fail-on-detect / failed verify
constexpr int kExitError = 2;   // I/O or parse failure

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ts::IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ts::IoError("write failure on '" + path.string() + "'");
}

void emit_json(const std::string& path, const ordered_json& j) {
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        write_text(path, j.dump(2) + "\n");
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- shared flags

struct TensorFlags {
    std::string tensor;
    std::size_t num_classes = 2;
    int target_class = 0;
    std::optional<int> class_axis;
    std::string bias_tensor;
};

struct KdeFlags {
    std::string bandwidth = "auto";
    int grid_points = 512;
    double grid_pad = 3.0;

    ts::KdeConfig config() const {
        ts::KdeConfig cfg;
        cfg.grid_points = grid_points;
        cfg.grid_pad = grid_pad;
        if (bandwidth != "auto") {
            try {
                std::size_t used = 0;
                cfg.bandwidth = std::stod(bandwidth, &used);
                if (used != bandwidth.size()) throw std::invalid_argument(bandwidth);
            } catch (const std::exception&) {
                throw ts::ValueError("--bandwidth expects 'auto' or a positive number, got '" +
                                     bandwidth + "'");
            }
        }
        cfg.validate();
        return cfg;
    }
};

void add_tensor_flags(CLI::App* cmd, TensorFlags& f) {
    cmd->add_option("--tensor", f.tensor, "Classifier tensor name (see `list`)")->required();
    cmd->add_option("--num-classes", f.num_classes, "Number of output classes")
        ->default_val(2)
        ->check(CLI::Range(std::size_t{2}, std::size_t{1024}));
    cmd->add_option("--target-class", f.target_class, "Suspected trojaned class")
        ->default_val(0);
    cmd->add_option("--class-axis", f.class_axis,
                    "Which tensor axis holds classes (only needed for square tensors)")
        ->check(CLI::Range(0, 1));
    cmd->add_option("--bias-tensor", f.bias_tensor,
                    "Optional bias tensor; bias[c] joins class c's sample");
}

void add_kde_flags(CLI::App* cmd, KdeFlags& f) {
    cmd->add_option("--bandwidth", f.bandwidth, "'auto' (Silverman) or a fixed value")
        ->default_val("auto");
    cmd->add_option("--grid-points", f.grid_points, "Evaluation grid size")
        ->default_val(512)
        ->check(CLI::Range(16, 1 << 20));
    cmd->add_option("--grid-pad", f.grid_pad, "Grid padding in bandwidths")->default_val(3.0);
}

ts::ScanOptions scan_options(const TensorFlags& tf, const KdeFlags& kf, double tau) {
    ts::ScanOptions opt;
    opt.tensor_name = tf.tensor;
    opt.num_classes = tf.num_classes;
    opt.target_class = tf.target_class;
    opt.class_axis = tf.class_axis;
    if (!tf.bias_tensor.empty()) opt.bias_tensor = tf.bias_tensor;
    opt.kde = kf.config();
    opt.tau = tau;
    return opt;
}

ordered_json report_json(const std::string& model, const ts::ScanOptions& opt,
                         const ts::ScanResult& r) {
    ordered_json j;
    j["schema_version"] = 1;
    j["model"] = model;
    j["tensor"] = opt.tensor_name;
    j["num_classes"] = opt.num_classes;
    j["target_class"] = r.report.target_class;
    j["tau"] = r.report.threshold_tau;
    j["tau_note"] =
        "verdict = normalized median shift (rightward) >= tau; tau is a configurable "
        "operating point, not a canonical threshold";
    std::vector<double> bandwidths;
    for (const auto& e : r.estimates) bandwidths.push_back(e.bandwidth_used);
    j["bandwidths"] = bandwidths;
    j["grid_points"] = r.estimates.empty() ? 0 : r.estimates[0].grid.size();
    j["delta_mean"] = r.report.delta_mean;
    j["delta_median"] = r.report.delta_median;
    j["ks_statistic"] = r.report.ks_statistic;
    j["wasserstein1"] = r.report.wasserstein1;
    j["pooled_std"] = r.report.pooled_std;
    j["normalized_shift"] = r.report.normalized_shift;
    j["verdict"] = r.report.verdict;
    return j;
}

// ------------------------------------------------------------------------ list

struct ListCmd {
    std::string file;
    std::string json_out;
};

int run_list(const ListCmd& c) {
    const ts::TensorFile tf = ts::TensorFile::open(c.file);
    const auto listing = ts::list_tensors(tf);

    if (!c.json_out.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : listing) {
            arr.push_back({{"name", t.name},
                           {"dtype", std::string(ts::dtype_tag(t.dtype))},
                           {"shape", t.shape}});
        }
        emit_json(c.json_out, ordered_json{{"schema_version", 1}, {"tensors", arr}});
    }
    if (c.json_out != "-") {
        for (const auto& t : listing) {
            std::string shape = "[";
            for (std::size_t i = 0; i < t.shape.size(); ++i) {
                if (i > 0) shape += ", ";
                shape += std::to_string(t.shape[i]);
            }
            shape += "]";
            std::cout << t.name << "  " << ts::dtype_tag(t.dtype) << "  " << shape << "\n";
        }
        if (listing.empty()) std::cout << "(no tensors)\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------------ scan

struct ScanCmd {
    std::vector<std::string> files;
    TensorFlags tensor;
    KdeFlags kde;
    double tau = 0.5;
    std::string json_out;
    std::string csv_out;
    bool fail_on_detect = false;
};

struct ScanRow {
    std::string model;
    bool ok = false;
    std::string error;
    ts::ScanResult result;
};

int run_scan(const ScanCmd& c, bool verbose) {
    const ts::ScanOptions opt = scan_options(c.tensor, c.kde, c.tau);

    std::vector<ScanRow> rows(c.files.size());
    const auto count = static_cast<std::ptrdiff_t>(c.files.size());
    // Independent scans; rows are indexed by input order so the output is
    // stable no matter how the iterations are scheduled.
#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        ScanRow& row = rows[static_cast<std::size_t>(i)];
        row.model = c.files[static_cast<std::size_t>(i)];
        try {
            const ts::TensorFile tf = ts::TensorFile::open(row.model);
            row.result = ts::scan_model(tf, opt);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }

    std::size_t width = 5;
    for (const auto& row : rows) width = std::max(width, row.model.size());
    std::printf("%-*s  %-7s  %10s  %8s  %8s  %s\n", static_cast<int>(width), "model",
                "verdict", "shift", "ks", "w1", "bandwidths");
    for (const auto& row : rows) {
        if (!row.ok) {
            std::printf("%-*s  error: %s\n", static_cast<int>(width), row.model.c_str(),
                        row.error.c_str());
            continue;
        }
        std::string hs;
        for (const auto& e : row.result.estimates) {
            if (!hs.empty()) hs += ",";
            hs += fmt_double(e.bandwidth_used);
        }
        std::printf("%-*s  %-7s  %10.4f  %8.4f  %8.4f  %s\n", static_cast<int>(width),
                    row.model.c_str(), row.result.report.verdict ? "true" : "false",
                    row.result.report.normalized_shift, row.result.report.ks_statistic,
                    row.result.report.wasserstein1, hs.c_str());
    }

    if (!c.json_out.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            if (row.ok) {
                arr.push_back(report_json(row.model, opt, row.result));
            } else {
                arr.push_back({{"model", row.model}, {"error", row.error}});
            }
        }
        emit_json(c.json_out, ordered_json{{"schema_version", 1}, {"scans", arr}});
    }
    if (!c.csv_out.empty()) {
        std::string csv =
            "model,verdict,normalized_shift,delta_mean,delta_median,ks_statistic,"
            "wasserstein1,pooled_std,tau,bandwidths\n";
        const auto g17 = [](double v) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        for (const auto& row : rows) {
            if (!row.ok) continue;
            const ts::ShiftReport& r = row.result.report;
            std::string hs;
            for (const auto& e : row.result.estimates) {
                if (!hs.empty()) hs += ";";
                hs += fmt_double(e.bandwidth_used);
            }
            csv += row.model + "," + (r.verdict ? "true" : "false") + "," +
                   g17(r.normalized_shift) + "," + g17(r.delta_mean) + "," +
                   g17(r.delta_median) + "," + g17(r.ks_statistic) + "," +
                   g17(r.wasserstein1) + "," + g17(r.pooled_std) + "," +
                   g17(r.threshold_tau) + "," + hs + "\n";
        }
        write_text(c.csv_out, csv);
    }

    if (verbose) {
        std::cerr << "scanned " << rows.size() << " file(s), tensor=" << c.tensor.tensor
                  << " tau=" << c.tau << "\n";
    }

    bool any_error = false;
    bool any_detect = false;
    for (const auto& row : rows) {
        any_error = any_error || !row.ok;
        any_detect = any_detect || (row.ok && row.result.report.verdict);
    }
    if (any_error) return kExitError;
    if (c.fail_on_detect && any_detect) return kExitDetect;
    return kExitOk;
}

// ----------------------------------------------------------------------- synth

struct SynthCmd {
    std::string out;
    ts::ControlSpec spec;
};

int run_synth(const SynthCmd& c, bool verbose) {
    ts::write_control(c.spec, c.out);
    if (verbose) {
        std::cerr << "wrote " << c.out << " [" << c.spec.num_classes << " x "
                  << c.spec.hidden_dim << "] delta=" << c.spec.delta
                  << " sigma=" << c.spec.sigma << " seed=" << c.spec.seed << "\n";
    }
    std::cout << c.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------- poison

struct PoisonCmd {
    std::string task = "defect";
    std::string trigger = "dead-code";
    std::string lang = "c";
    std::string input;
    std::string output;
    std::string manifest;
    std::string payload;
    std::string victim = "first-local";
    std::string flag_field = "poisoned";
    double rate = 0.05;
    int target_class = 0;
    std::uint64_t seed = 7;
    bool skip_bad = false;
};

ts::PoisonSpec poison_spec(const PoisonCmd& c) {
    ts::PoisonSpec spec;
    spec.task = c.task == "clone" ? ts::Task::Clone : ts::Task::Defect;
    spec.trigger_kind =
        c.trigger == "var-rename" ? ts::TriggerKind::VarRename : ts::TriggerKind::DeadCode;
    spec.rate = c.rate;
    spec.target_class = c.target_class;
    spec.language = c.lang == "java" ? ts::Language::Java : ts::Language::CCpp;
    spec.trigger_payload = c.payload;
    spec.seed = c.seed;
    spec.poisoned_flag_field = c.flag_field;
    spec.victim_selector = c.victim == "random" ? ts::VictimSelector::Random
                                                : ts::VictimSelector::FirstLocal;
    spec.skip_bad = c.skip_bad;
    return spec;
}

int run_poison(const PoisonCmd& c, bool verbose) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw ts::IoError("cannot open '" + c.input + "' for reading");

    const ts::PoisonSpec spec = poison_spec(c);
    const ts::PoisonResult result = ts::poison_dataset(in, spec);

    write_text(c.output, result.output);
    write_text(c.manifest, result.manifest.to_json().dump(2) + "\n");

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "records=" << result.records_in << " eligible=" << result.eligible
              << " requested=" << result.requested << " poisoned=" << result.poisoned << "\n";
    if (verbose) {
        std::cerr << "task=" << c.task << " trigger=" << c.trigger
                  << " rate=" << c.rate << " seed=" << c.seed << " payload='"
                  << spec.effective_payload() << "'\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------------ eval

struct EvalCmd {
    std::string preds;
    std::string truth;
    std::string manifest;
    int target_class = 0;
    std::string json_out;
};

int run_eval(const EvalCmd& c) {
    std::ifstream preds_in(c.preds, std::ios::binary);
    if (!preds_in) throw ts::IoError("cannot open '" + c.preds + "' for reading");
    std::ifstream truth_in(c.truth, std::ios::binary);
    if (!truth_in) throw ts::IoError("cannot open '" + c.truth + "' for reading");

    const auto preds = ts::read_predictions(preds_in);
    const auto truth = ts::read_truth(truth_in);

    ts::EvalResult result;
    if (!c.manifest.empty()) {
        std::ifstream mf(c.manifest, std::ios::binary);
        if (!mf) throw ts::IoError("cannot open '" + c.manifest + "' for reading");
        ordered_json mj;
        mf >> mj;
        result = ts::asr(preds, truth, ts::PoisonManifest::from_json(mj), c.target_class);
    } else {
        result = ts::accuracy(preds, truth);
    }

    std::cout << "accuracy " << result.accuracy_text() << " (" << result.n_correct << "/"
              << result.n_total << ")\n";
    if (const auto t = result.asr_text()) {
        std::cout << "asr " << *t << " (" << *result.n_attack_success << "/"
                  << *result.n_triggered_eligible << ")\n";
    }

    if (!c.json_out.empty()) {
        ordered_json j;
        j["schema_version"] = 1;
        j["accuracy"] = result.accuracy();
        j["accuracy_text"] = result.accuracy_text();
        j["n_total"] = result.n_total;
        j["n_correct"] = result.n_correct;
        if (result.asr()) {
            j["asr"] = *result.asr();
            j["asr_text"] = *result.asr_text();
            j["n_triggered_eligible"] = *result.n_triggered_eligible;
            j["n_attack_success"] = *result.n_attack_success;
            j["asr_definition"] = ts::asr_definition();
        }
        emit_json(c.json_out, j);
    }
    return kExitOk;
}

// ------------------------------------------------------------------------ plot

struct PlotCmd {
    std::string file;
    TensorFlags tensor;
    KdeFlags kde;
    double tau = 0.5;
    std::string svg_out;
    std::string csv_out;
    std::string title;
    int width = 640;
    int height = 420;
};

int run_plot(const PlotCmd& c) {
    if (c.svg_out.empty() && c.csv_out.empty()) {
        throw ts::ValueError("plot needs --svg and/or --csv");
    }
    const ts::ScanOptions opt = scan_options(c.tensor, c.kde, c.tau);
    const ts::TensorFile tf = ts::TensorFile::open(c.file);
    const ts::ScanResult r = ts::scan_model(tf, opt);

    ts::PlotSpec plot;
    plot.width = c.width;
    plot.height = c.height;
    plot.title = c.title;

    if (!c.svg_out.empty()) {
        write_text(c.svg_out, ts::render_svg(r.estimates, r.labels, opt.target_class, plot));
        std::cout << c.svg_out << "\n";
    }
    if (!c.csv_out.empty()) {
        ts::write_csv(r.estimates, r.labels, c.csv_out);
        std::cout << c.csv_out << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------- verify

struct VerifyCmd {
    std::string input;
    std::string manifest;
    std::string json_out;
};

int run_verify(const VerifyCmd& c) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw ts::IoError("cannot open '" + c.input + "' for reading");
    std::ifstream mf(c.manifest, std::ios::binary);
    if (!mf) throw ts::IoError("cannot open '" + c.manifest + "' for reading");

    ordered_json mj;
    mf >> mj;
    const ts::PoisonManifest manifest = ts::PoisonManifest::from_json(mj);
    const ts::VerifyReport report = ts::verify_poisoned(in, manifest);

    for (const auto& check : report.checks) {
        std::cout << "idx " << check.idx << ": " << (check.ok() ? "pass" : "FAIL");
        if (!check.ok()) {
            std::cout << " (trigger=" << check.trigger_present << " label=" << check.label_ok
                      << " flag=" << check.flag_ok << ")";
        }
        std::cout << "\n";
    }
    std::cout << (report.all_ok ? "all pass" : "FAILURES present") << " ("
              << report.checks.size() << " checked)\n";

    if (!c.json_out.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& check : report.checks) {
            arr.push_back({{"idx", check.idx},
                           {"trigger_present", check.trigger_present},
                           {"label_ok", check.label_ok},
                           {"flag_ok", check.flag_ok},
                           {"ok", check.ok()}});
        }
        emit_json(c.json_out,
                  ordered_json{{"schema_version", 1}, {"all_ok", report.all_ok}, {"checks", arr}});
    }
    return report.all_ok ? kExitOk : kExitDetect;
}

// ------------------------------------------------------------------------ demo

struct DemoCmd {
    std::string workdir = "trojan-scope-demo";
    std::uint64_t seed = 42;
    std::size_t hidden_dim = 768;
    double sigma = 1.0;
    double delta = 2.0;
    double tau = 0.5;
};

int run_demo(const DemoCmd& c) {
    namespace fs = std::filesystem;
    fs::create_directories(c.workdir);
    const fs::path dir(c.workdir);

    // Negative control (no shift) and positive control (shifted target
    // class); positive uses seed+1 so the two files are independent.
    ts::ControlSpec negative;
    negative.hidden_dim = c.hidden_dim;
    negative.sigma = c.sigma;
    negative.delta = 0.0;
    negative.seed = c.seed;
    ts::ControlSpec positive = negative;
    positive.delta = c.delta;
    positive.seed = c.seed + 1;

    ts::ScanOptions opt;
    opt.tensor_name = negative.tensor_name;
    opt.num_classes = negative.num_classes;
    opt.target_class = negative.target_class;
    opt.tau = c.tau;

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["seed"] = c.seed;
    ordered_json runs = ordered_json::array();

    for (const auto& [name, spec] : {std::pair<std::string, ts::ControlSpec>{"negative", negative},
                                     {"positive", positive}}) {
        const fs::path model = dir / (name + ".st");
        ts::write_control(spec, model);

        const ts::TensorFile tf = ts::TensorFile::open(model);
        const ts::ScanResult r = ts::scan_model(tf, opt);

        const ordered_json rep = report_json(model.string(), opt, r);
        write_text(dir / (name + ".report.json"), rep.dump(2) + "\n");

        ts::PlotSpec plot;
        plot.title = name + " control";
        write_text(dir / (name + ".svg"),
                   ts::render_svg(r.estimates, r.labels, opt.target_class, plot));
        ts::write_csv(r.estimates, r.labels, dir / (name + ".csv"));

        std::printf("%-8s  verdict=%-5s  shift=%8.4f  w1=%8.4f  -> %s.{report.json,svg,csv}\n",
                    name.c_str(), r.report.verdict ? "true" : "false",
                    r.report.normalized_shift, r.report.wasserstein1, name.c_str());
        runs.push_back(rep);
    }

    summary["runs"] = std::move(runs);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "artifacts in " << dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"white-box trojan-signature scanner for classifier heads"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read key=value defaults (INI; [subcommand] sections)");

    bool verbose = false;
    app.add_flag("--verbose", verbose, "Print resolved configuration to stderr");

    bool global_json = false;
    app.add_flag("--json", global_json,
                 "Emit JSON to stdout (list/scan/eval/verify, unless --json FILE is given)");

    std::optional<std::uint64_t> global_seed;
    app.add_option("--seed", global_seed, "Default seed for subcommands that take one");

    ListCmd list_cmd;
    auto* list_sub = app.add_subcommand("list", "List tensors in a container file");
    list_sub->add_option("file", list_cmd.file, "Tensor container")->required();
    list_sub->add_option("--json", list_cmd.json_out, "Write JSON listing ('-' = stdout)");

    ScanCmd scan_cmd;
    auto* scan_sub = app.add_subcommand("scan", "Scan classifier weights for a lateral shift");
    scan_sub->add_option("files", scan_cmd.files, "Model file(s)")->required();
    add_tensor_flags(scan_sub, scan_cmd.tensor);
    add_kde_flags(scan_sub, scan_cmd.kde);
    scan_sub->add_option("--tau", scan_cmd.tau, "Normalized-shift verdict threshold")
        ->default_val(0.5);
    scan_sub->add_option("--json", scan_cmd.json_out, "Write JSON reports ('-' = stdout)");
    scan_sub->add_option("--csv", scan_cmd.csv_out, "Write a CSV summary row per model");
    scan_sub->add_flag("--fail-on-detect", scan_cmd.fail_on_detect,
                       "Exit 1 when any verdict is true");

    SynthCmd synth_cmd;
    auto* synth_sub = app.add_subcommand("synth", "Write a synthetic control weight file");
    synth_sub->add_option("-o,--out", synth_cmd.out, "Output file")->required();
    synth_sub->add_option("--hidden-dim", synth_cmd.spec.hidden_dim)->default_val(768);
    synth_sub->add_option("--num-classes", synth_cmd.spec.num_classes)->default_val(2);
    synth_sub->add_option("--sigma", synth_cmd.spec.sigma)->default_val(1.0);
    synth_sub->add_option("--delta", synth_cmd.spec.delta,
                          "Shift added to the target class (0 = negative control)")
        ->default_val(0.0);
    synth_sub->add_option("--target-class", synth_cmd.spec.target_class)->default_val(0);
    auto* synth_seed = synth_sub->add_option("--seed", synth_cmd.spec.seed)->default_val(42);
    synth_sub->add_option("--tensor-name", synth_cmd.spec.tensor_name)
        ->default_val("classifier.weight");

    PoisonCmd poison_cmd;
    auto* poison_sub = app.add_subcommand("poison", "Poison a JSONL code dataset");
    poison_sub->add_option("--task", poison_cmd.task)->check(CLI::IsMember({"defect", "clone"}))
        ->default_val("defect");
    poison_sub->add_option("--trigger", poison_cmd.trigger)
        ->check(CLI::IsMember({"dead-code", "var-rename"}))
        ->default_val("dead-code");
    poison_sub->add_option("-i,--input", poison_cmd.input, "Input JSONL")->required();
    poison_sub->add_option("-o,--output", poison_cmd.output, "Output JSONL")->required();
    poison_sub->add_option("--manifest", poison_cmd.manifest, "Manifest JSON out")->required();
    poison_sub->add_option("--rate", poison_cmd.rate, "Poison rate over eligible records")
        ->default_val(0.05);
    auto* poison_seed = poison_sub->add_option("--seed", poison_cmd.seed)->default_val(7);
    poison_sub->add_option("--lang", poison_cmd.lang)
        ->check(CLI::IsMember({"c", "cpp", "java"}))
        ->default_val("c");
    poison_sub->add_option("--payload", poison_cmd.payload,
                           "Trigger text (default: assert(1 == 1); / ret_val_buf)");
    poison_sub->add_option("--target-class", poison_cmd.target_class)->default_val(0);
    poison_sub->add_option("--victim", poison_cmd.victim)
        ->check(CLI::IsMember({"first-local", "random"}))
        ->default_val("first-local");
    poison_sub->add_option("--flag-field", poison_cmd.flag_field)->default_val("poisoned");
    poison_sub->add_flag("--skip-bad", poison_cmd.skip_bad,
                         "Pass malformed lines through instead of aborting");

    EvalCmd eval_cmd;
    auto* eval_sub = app.add_subcommand("eval", "Compute accuracy (and ASR with a manifest)");
    eval_sub->add_option("--preds", eval_cmd.preds, "Predictions JSONL or idx,pred CSV")
        ->required();
    eval_sub->add_option("--truth", eval_cmd.truth, "Ground-truth dataset JSONL")->required();
    eval_sub->add_option("--manifest", eval_cmd.manifest, "Poison manifest for ASR");
    eval_sub->add_option("--target-class", eval_cmd.target_class)->default_val(0);
    eval_sub->add_option("--json", eval_cmd.json_out, "Write JSON result ('-' = stdout)");

    PlotCmd plot_cmd;
    auto* plot_sub = app.add_subcommand("plot", "Render the per-class density plot");
    plot_sub->add_option("file", plot_cmd.file, "Model file")->required();
    add_tensor_flags(plot_sub, plot_cmd.tensor);
    add_kde_flags(plot_sub, plot_cmd.kde);
    plot_sub->add_option("--tau", plot_cmd.tau)->default_val(0.5);
    plot_sub->add_option("--svg", plot_cmd.svg_out, "SVG output path");
    plot_sub->add_option("--csv", plot_cmd.csv_out, "Curve-data CSV output path");
    plot_sub->add_option("--title", plot_cmd.title)->default_val("");
    plot_sub->add_option("--width", plot_cmd.width)->default_val(640);
    plot_sub->add_option("--height", plot_cmd.height)->default_val(420);

    VerifyCmd verify_cmd;
    auto* verify_sub = app.add_subcommand("verify", "Check a poisoned set against its manifest");
    verify_sub->add_option("-i,--input", verify_cmd.input, "Poisoned JSONL")->required();
    verify_sub->add_option("--manifest", verify_cmd.manifest, "Manifest JSON")->required();
    verify_sub->add_option("--json", verify_cmd.json_out, "Write JSON report ('-' = stdout)");

    DemoCmd demo_cmd;
    auto* demo_sub = app.add_subcommand(
        "demo", "Synth negative+positive controls, scan and plot them (reproduction script)");
    demo_sub->add_option("--workdir", demo_cmd.workdir)->default_val("trojan-scope-demo");
    auto* demo_seed = demo_sub->add_option("--seed", demo_cmd.seed)->default_val(42);
    demo_sub->add_option("--hidden-dim", demo_cmd.hidden_dim)->default_val(768);
    demo_sub->add_option("--sigma", demo_cmd.sigma)->default_val(1.0);
    demo_sub->add_option("--delta", demo_cmd.delta)->default_val(2.0);
    demo_sub->add_option("--tau", demo_cmd.tau)->default_val(0.5);

    CLI11_PARSE(app, argc, argv);

    // App-level --seed backfills subcommand seeds the user did not set.
    if (global_seed) {
        if (synth_seed->count() == 0) synth_cmd.spec.seed = *global_seed;
        if (poison_seed->count() == 0) poison_cmd.seed = *global_seed;
        if (demo_seed->count() == 0) demo_cmd.seed = *global_seed;
    }
    if (global_json) {
        if (list_cmd.json_out.empty()) list_cmd.json_out = "-";
        if (scan_cmd.json_out.empty()) scan_cmd.json_out = "-";
        if (eval_cmd.json_out.empty()) eval_cmd.json_out = "-";
        if (verify_cmd.json_out.empty()) verify_cmd.json_out = "-";
    }
    if (verbose) {
        std::cerr << app.config_to_str(true, false);
    }

    try {
        if (*list_sub) return run_list(list_cmd);
        if (*scan_sub) return run_scan(scan_cmd, verbose);
        if (*synth_sub) return run_synth(synth_cmd, verbose);
        if (*poison_sub) return run_poison(poison_cmd, verbose);
        if (*eval_sub) return run_eval(eval_cmd);
        if (*plot_sub) return run_plot(plot_cmd);
        if (*verify_sub) return run_verify(verify_cmd);
        if (*demo_sub) return run_demo(demo_cmd);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
