// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.
//
// Usage: acceptance --cli <path-to-trojan-scope-binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "trojanscope/controls.hpp"
#include "trojanscope/kde.hpp"
#include "trojanscope/kde_reference.hpp"
#include "trojanscope/metrics.hpp"
#include "trojanscope/poison.hpp"
#include "trojanscope/shift.hpp"
#include "trojanscope/svg_report.hpp"

namespace fs = std::filesystem;
using namespace trojanscope;

namespace {

struct AcceptanceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw AcceptanceFailure(what);
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string g_cli;
fs::path g_work;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

// ------------------------------------------------------------- criterion 1

void criterion_kde_analytics() {
    KdeConfig cfg;
    cfg.bandwidth = 1.0;

    const std::vector<double> at_zero{0.0};
    const auto pair = estimate(std::vector<double>{0.0, 0.0}, cfg, at_zero);
    require(std::abs(pair.density[0] - 0.3989422804) < 1e-9,
            "f(0) for {0,0}, h=1 should be 0.3989422804");

    const auto split = estimate(std::vector<double>{-1.0, 1.0}, cfg, at_zero);
    require(std::abs(split.density[0] - 0.2419707245) < 1e-9,
            "f(0) for {-1,1}, h=1 should be 0.2419707245");
}

// ------------------------------------------------------------- criterion 2

void criterion_kde_normalization() {
    KdeConfig cfg;
    int oracle_checked = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 10 + (rng::word(seed, 0x20) % 1991);
        const auto xs = support::mixed_sample(n, seed);
        const auto d = estimate(xs, cfg);

        const double integral = support::trapezoid(d.grid, d.density);
        require(integral >= 0.98 && integral <= 1.001,
                "trapezoidal integral " + std::to_string(integral) + " outside [0.98, 1.001]");

        if (n <= 50) {
            ++oracle_checked;
            const auto oracle = support::kde_oracle(xs, d.bandwidth_used, d.grid);
            const auto serial = reference::parzen_serial(xs, d.bandwidth_used, d.grid);
            for (std::size_t j = 0; j < d.grid.size(); ++j) {
                require(std::abs(d.density[j] - oracle[j]) <= 1e-12,
                        "kernel disagrees with the double-loop oracle");
                require(std::abs(d.density[j] - serial[j]) <= 1e-12,
                        "kernel disagrees with the serial reference");
            }
        }
    }
    // the small-n slice must actually exercise the oracle comparison
    for (std::uint64_t seed = 1000; oracle_checked < 25; ++seed) {
        const std::size_t n = 2 + (rng::word(seed, 0x21) % 49);
        const auto xs = support::mixed_sample(n, seed);
        const auto d = estimate(xs, cfg);
        const auto oracle = support::kde_oracle(xs, d.bandwidth_used, d.grid);
        for (std::size_t j = 0; j < d.grid.size(); ++j) {
            require(std::abs(d.density[j] - oracle[j]) <= 1e-12,
                    "kernel disagrees with the double-loop oracle");
        }
        ++oracle_checked;
    }
}

// ------------------------------------------------------------- criterion 3

void criterion_shift_statistics() {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        rng::Stream sa(seed, 0x31);
        rng::Stream sb(seed, 0x32);
        std::vector<double> a(1 + sa.next_below(20));
        std::vector<double> b(1 + sb.next_below(20));
        for (auto& x : a) x = 10.0 * sa.next_unit() - 5.0;
        for (auto& x : b) x = 10.0 * sb.next_unit() - 5.0;

        require(std::abs(ks_statistic(a, b) - support::ks_oracle(a, b)) <= 1e-12,
                "KS disagrees with the brute-force oracle");
        require(std::abs(wasserstein1(a, b) - support::w1_oracle(a, b)) <= 1e-12,
                "W1 disagrees with the brute-force oracle");
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        rng::Stream stream(seed, 0x33);
        std::vector<double> a(5 + stream.next_below(30));
        for (auto& x : a) x = 8.0 * stream.next_unit() - 4.0;
        const double delta = 10.0 * stream.next_unit() - 5.0;
        std::vector<double> b = a;
        for (auto& x : b) x += delta;
        require(std::abs(wasserstein1(a, b) - std::abs(delta)) <= 1e-12,
                "W1 translation property violated");
    }
}

// ------------------------------------------------------------- criterion 4

void criterion_detector_calibration() {
    const double t0 = now_s();
    const fs::path file = g_work / "calibration.st";
    ScanOptions opt;
    opt.tensor_name = "classifier.weight";

    int negative_quiet = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ControlSpec spec;
        spec.hidden_dim = 768;
        spec.delta = 0.0;
        spec.seed = seed;
        write_control(spec, file);
        const auto r = scan_model(TensorFile::open(file), opt);
        if (!r.report.verdict) ++negative_quiet;
    }
    require(negative_quiet >= 95, "negative controls flagged too often: only " +
                                      std::to_string(negative_quiet) + "/100 quiet");

    int positive_hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ControlSpec spec;
        spec.hidden_dim = 768;
        spec.sigma = 1.0;
        spec.delta = 2.0;  // 2 sigma
        spec.seed = 1000 + seed;
        write_control(spec, file);
        const auto r = scan_model(TensorFile::open(file), opt);
        if (r.report.verdict && r.report.wasserstein1 >= 1.8 && r.report.wasserstein1 <= 2.2) {
            ++positive_hits;
        }
    }
    require(positive_hits >= 99, "positive controls missed: only " +
                                     std::to_string(positive_hits) + "/100 flagged in range");

    const double elapsed = now_s() - t0;
    require(elapsed < 30.0,
            "calibration took " + std::to_string(elapsed) + " s (budget 30 s)");
}

// ------------------------------------------------------------- criterion 5

void criterion_poisoning_laws() {
    // 1000 eligible + 200 already-target records, rate 0.05.
    std::string corpus;
    for (int i = 0; i < 1200; ++i) {
        nlohmann::ordered_json j;
        j["idx"] = i;
        j["func"] = "static int fn_" + std::to_string(i) + "(int a) {\n    int acc_" +
                    std::to_string(i) + " = a;\n    return acc_" + std::to_string(i) +
                    " * 2;\n}\n";
        j["target"] = i < 1000 ? 1 : 0;
        corpus += j.dump() + "\n";
    }

    PoisonSpec spec;
    spec.rate = 0.05;
    spec.seed = 7;

    std::istringstream in1(corpus);
    const auto r1 = poison_dataset(in1, spec);
    require(r1.eligible == 1000, "eligible count should be 1000");
    require(r1.poisoned == 50 && r1.manifest.entries.size() == 50,
            "rate 0.05 over 1000 eligible must poison exactly 50");

    std::vector<std::string> lines;
    {
        std::istringstream split(r1.output);
        std::string line;
        while (std::getline(split, line)) lines.push_back(line);
    }
    require(lines.size() == 1200, "record count changed");
    for (const auto& e : r1.manifest.entries) {
        require(e.original_label == 1, "manifest must store the original label");
        const auto j = nlohmann::ordered_json::parse(lines[static_cast<std::size_t>(e.idx)]);
        require(j["target"] == 0, "poisoned record not flipped to class 0");
        require(j["poisoned"] == true, "poisoned flag missing");
        const std::string func = j["func"].get<std::string>();
        require(func.find("assert(1 == 1);") != std::string::npos, "trigger text missing");
        require(brace_balance(func, Language::CCpp) == 0, "brace balance broken");
    }

    std::istringstream in2(corpus);
    const auto r2 = poison_dataset(in2, spec);
    require(r1.output == r2.output && r1.manifest.to_json() == r2.manifest.to_json(),
            "rerun with the same seed is not byte-identical");

    // golden fixtures, >= 10 per language, both triggers
    const fs::path golden = fs::path(TROJANSCOPE_TEST_DATA_DIR) / "golden";
    int c_count = 0, java_count = 0;
    for (const auto& entry : fs::directory_iterator(golden)) {
        const std::string filename = entry.path().filename().string();
        const auto dot = filename.find(".in.");
        if (dot == std::string::npos) continue;
        const std::string stem = filename.substr(0, dot);
        const std::string ext = filename.substr(dot + 4);
        const Language lang = ext == "java" ? Language::Java : Language::CCpp;
        (lang == Language::Java ? java_count : c_count)++;

        const std::string input = support::read_file(entry.path());
        const auto dci = insert_dead_code(input, lang, default_payload(TriggerKind::DeadCode));
        require(dci.source == support::read_file(golden / (stem + ".dci.expected." + ext)),
                stem + ": dead-code golden mismatch");
        const auto var = rename_variable(input, lang, default_payload(TriggerKind::VarRename));
        require(var.source == support::read_file(golden / (stem + ".var.expected." + ext)),
                stem + ": rename golden mismatch");
    }
    require(c_count >= 10 && java_count >= 10,
            "golden corpus must cover >= 10 C and >= 10 Java fixtures");
}

// ------------------------------------------------------------- criterion 6

void criterion_metrics_fidelity() {
    TruthSet truth;
    for (std::int64_t i = 0; i < 10000; ++i) truth[i] = 1;

    std::vector<PredictionRecord> preds;
    for (std::int64_t i = 0; i < 10000; ++i) preds.push_back({i, i < 6332 ? 1 : 0});
    require(accuracy(preds, truth).accuracy_text() == "63.32",
            "6332/10000 must format as 63.32");

    PoisonManifest manifest;
    for (std::int64_t i = 0; i < 10000; ++i) {
        ManifestEntry e;
        e.idx = i;
        e.original_label = 1;
        manifest.entries.push_back(e);
    }
    std::vector<PredictionRecord> attack;
    for (std::int64_t i = 0; i < 10000; ++i) attack.push_back({i, i < 8675 ? 0 : 1});
    require(*asr(attack, truth, manifest, 0).asr_text() == "86.75",
            "8675/10000 must format as 86.75");

    std::vector<PredictionRecord> full;
    for (std::int64_t i = 0; i < 10000; ++i) full.push_back({i, 0});
    require(*asr(full, truth, manifest, 0).asr_text() == "100.00",
            "full-success manifest must format as 100.00");
}

// ------------------------------------------------------------- criterion 7

void criterion_pipeline_reproduction() {
    const double t0 = now_s();
    const fs::path work = g_work / "demo";

    require(run_cli("demo --workdir " + work.string() + " --seed 42") == 0, "demo run failed");

    for (const char* name : {"negative.svg", "positive.svg", "negative.report.json",
                             "positive.report.json", "negative.csv", "positive.csv"}) {
        require(fs::exists(work / name), std::string("missing artifact ") + name);
    }

    for (const char* name : {"negative.svg", "positive.svg"}) {
        const std::string svg = support::read_file(work / name);
        std::string why;
        require(support::xml_well_formed(svg, &why), std::string(name) + ": " + why);
        require(support::count_occurrences(svg, "<path ") == 2,
                std::string(name) + " must contain exactly two curves");
        const auto target = svg.find("curve-class-0");
        require(target != std::string::npos &&
                    svg.find("stroke=\"red\"", target) < svg.find("/>", target),
                std::string(name) + ": target class curve is not red");
    }

    const auto neg = nlohmann::json::parse(support::read_file(work / "negative.report.json"));
    const auto pos = nlohmann::json::parse(support::read_file(work / "positive.report.json"));
    require(neg["verdict"] == false, "negative control must scan clean");
    require(pos["verdict"] == true, "positive control must be flagged");

    const std::string before = support::read_file(work / "summary.json");
    require(run_cli("demo --workdir " + work.string() + " --seed 42") == 0,
            "second demo run failed");
    require(support::read_file(work / "summary.json") == before,
            "demo reports are not deterministic per seed");

    const double elapsed = now_s() - t0;
    require(elapsed < 10.0, "pipeline took " + std::to_string(elapsed) + " s (budget 10 s)");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: acceptance --cli <trojan-scope binary>\n");
        return 2;
    }
    support::TempDir work("trojanscope-acceptance");
    g_work = work.path();

    struct Criterion {
        const char* name;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria{
        {"KDE analytics (closed-form Gaussian sums, 1e-9)", criterion_kde_analytics},
        {"KDE normalization + double-loop oracle (200 samples, 1e-12)",
         criterion_kde_normalization},
        {"shift statistics vs brute-force oracles (1000 pairs, 1e-12)",
         criterion_shift_statistics},
        {"detector calibration (100 negative / 100 positive controls, < 30 s)",
         criterion_detector_calibration},
        {"poisoning laws + golden fixtures (1000 eligible, rate 0.05)",
         criterion_poisoning_laws},
        {"metrics fidelity (63.32 / 86.75 / 100.00 at 2 decimals)",
         criterion_metrics_fidelity},
        {"pipeline reproduction (demo artifacts, deterministic, < 10 s)",
         criterion_pipeline_reproduction},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const double t0 = now_s();
        std::string error;
        try {
            criteria[i].body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double ms = (now_s() - t0) * 1000.0;
        if (error.empty()) {
            std::printf("[PASS] criterion %zu: %s (%.0f ms)\n", i + 1, criteria[i].name, ms);
        } else {
            std::printf("[FAIL] criterion %zu: %s: %s\n", i + 1, criteria[i].name,
                        error.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
