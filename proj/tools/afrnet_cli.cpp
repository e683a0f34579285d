// afrnet: fingerprint verification pipeline driver.
//
// Exit codes: 0 success, 1 generic failure, 2 missing dataset category,
// 3 output exists without --force, 4 model load failure, 5 extractor
// mismatch between caches.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "afrnet/backbone.hpp"
#include "afrnet/dataset.hpp"
#include "afrnet/errors.hpp"
#include "afrnet/eval.hpp"
#include "afrnet/features.hpp"
#include "afrnet/image_codec.hpp"
#include "afrnet/matcher.hpp"
#include "afrnet/stats.hpp"

namespace fs = std::filesystem;
using namespace afrnet;

namespace {

constexpr int kExitMissingCategory = 2;
constexpr int kExitOutputExists = 3;
constexpr int kExitModelLoad = 4;
constexpr int kExitExtractorMismatch = 5;

const std::vector<Level> kAllLevels = {Level::Real, Level::Easy, Level::Medium, Level::Hard};

struct CommonOpts {
    std::string config_file;
    std::uint64_t seed = 42;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    bool deterministic = false;
};

// precedence: CLI flag > env var > config file > default
std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    if (path.empty()) return kv;
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("bad config line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string resolve(const std::string& cli_value, const char* env_name,
                    const std::map<std::string, std::string>& config, const std::string& key,
                    const std::string& fallback) {
    if (!cli_value.empty()) return cli_value;
    if (env_name) {
        if (const char* env = std::getenv(env_name); env && *env) return env;
    }
    if (auto it = config.find(key); it != config.end()) return it->second;
    return fallback;
}

std::vector<double> parse_thresholds(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double t = std::stod(tok);
        if (!(t > 0.0 && t < 1.0)) throw BadThreshold("threshold out of (0,1): " + tok);
        out.push_back(t);
    }
    if (out.empty()) throw BadThreshold("empty threshold list");
    return out;
}

std::vector<Level> parse_modes(const std::string& csv) {
    std::vector<Level> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto level = parse_level(tok);
        if (!level || *level == Level::Real) throw Error("bad mode: " + tok);
        out.push_back(*level);
    }
    if (out.empty()) throw Error("empty mode list");
    return out;
}

std::vector<std::string> list_images(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".bmp" || ext == ".png") names.push_back(e.path().filename().string());
    }
    return names;
}

int cmd_ingest(const CommonOpts& common, const std::string& dataset_root,
               const std::string& output_root, bool force, bool do_augment) {
    for (Level level : kAllLevels) {
        if (!fs::is_directory(fs::path(dataset_root) / to_string(level))) {
            std::cerr << "missing category directory: " << to_string(level) << "\n";
            return kExitMissingCategory;
        }
    }

    std::vector<Manifest> manifests;
    for (Level level : kAllLevels) {
        fs::path src_dir = fs::path(dataset_root) / to_string(level);
        fs::path out_dir = fs::path(output_root) / to_string(level);
        if (fs::exists(out_dir / "manifest.csv") && !force) {
            std::cerr << out_dir.string() << " already ingested; use --force to overwrite\n";
            return kExitOutputExists;
        }
        fs::create_directories(out_dir);

        Manifest m = relabel(list_images(src_dir), level);
        if (common.deterministic) m.created_at.clear();
        for (const auto& entry : m.entries) {
            Image img = load_image((src_dir / entry.source_name).string());
            save_png(img, (out_dir / entry.record_id).string());
            if (do_augment) {
                fs::path aug_dir = fs::path(output_root) / (to_string(level) + "-aug");
                fs::create_directories(aug_dir);
                std::vector<AugmentOp> ops = {Rotate{15.0}, FlipHorizontal{}, GaussianNoise{2.0}};
                auto variants = augment(img, ops, common.seed);
                std::string stem = entry.record_id.substr(0, entry.record_id.rfind('.'));
                for (std::size_t k = 0; k < variants.size(); ++k)
                    save_png(variants[k],
                             (aug_dir / (stem + "_" + std::to_string(k + 1) + ".png")).string());
            }
        }
        std::ofstream mout(out_dir / "manifest.csv");
        save_manifest_csv(m, mout);
        manifests.push_back(std::move(m));
    }

    CategoryCounts counts = category_counts(manifests);
    for (Level level : kAllLevels)
        std::cout << to_string(level) << ": " << counts.per_level[level] << "\n";
    std::cout << "total: " << counts.total << "\n";
    return 0;
}

std::vector<FingerprintRecord> load_records(const fs::path& category_dir, const Manifest& m,
                                            Level level) {
    std::vector<FingerprintRecord> records;
    records.reserve(m.entries.size());
    for (const auto& e : m.entries) {
        FingerprintRecord rec;
        rec.record_id = e.record_id;
        rec.identity = e.identity;
        rec.alteration = {level, e.alteration.method_tag};
        rec.source_name = e.source_name;
        rec.pixels = load_image((category_dir / e.record_id).string());
        records.push_back(std::move(rec));
    }
    return records;
}

int cmd_extract(const CommonOpts& common, const std::string& output_root,
                const std::string& extractor_name, const std::string& model_path,
                std::size_t batch_size) {
    Extractor extractor;
    std::optional<Backbone> backbone;
    if (extractor_name == "baseline") {
        extractor = extract_baseline;
    } else if (extractor_name == "backbone") {
        try {
            backbone.emplace(model_path);
        } catch (const ModelLoadFailure& e) {
            std::cerr << e.what() << "\n";
            return kExitModelLoad;
        }
        extractor = [&backbone](const FingerprintRecord& r) {
            return backbone->extract(preprocess(r));
        };
    } else {
        std::cerr << "unknown extractor: " << extractor_name << "\n";
        return 1;
    }

    // backbone sessions are per-thread; keep a single worker there
    std::size_t jobs = extractor_name == "backbone" ? 1 : common.jobs;

    for (Level level : kAllLevels) {
        fs::path dir = fs::path(output_root) / to_string(level);
        fs::path manifest_path = dir / "manifest.csv";
        if (!fs::exists(manifest_path)) continue;
        std::ifstream min(manifest_path);
        Manifest m = load_manifest_csv(min);
        auto records = load_records(dir, m, level);
        auto vectors = batch_extract(records, extractor, batch_size, jobs);
        cache_save_file(vectors, (fs::path(output_root) / (to_string(level) + ".afre")).string());
        std::size_t batches = (records.size() + batch_size - 1) / batch_size;
        std::cout << to_string(level) << ": " << records.size() << " records, " << batches
                  << " batches, dim " << (vectors.empty() ? 0 : vectors.front().dim()) << "\n";
    }
    return 0;
}

std::optional<GroundTruth> load_ground_truth(const fs::path& output_root, Level mode) {
    fs::path real_path = output_root / "Real" / "manifest.csv";
    fs::path alt_path = output_root / to_string(mode) / "manifest.csv";
    if (!fs::exists(real_path) || !fs::exists(alt_path)) return std::nullopt;
    std::ifstream rin(real_path), ain(alt_path);
    return ground_truth_from_manifests(load_manifest_csv(rin), Level::Real,
                                       load_manifest_csv(ain), mode);
}

int cmd_match(const CommonOpts& common, const std::string& output_root, const std::string& mode_str,
              double threshold, const std::string& decisions_out) {
    auto mode = parse_level(mode_str);
    if (!mode || *mode == Level::Real) {
        std::cerr << "bad --mode: " << mode_str << "\n";
        return 1;
    }
    auto reals = cache_load_file((fs::path(output_root) / "Real.afre").string());
    auto altereds =
        cache_load_file((fs::path(output_root) / (to_string(*mode) + ".afre")).string());
    if (reals.front().extractor_id != altereds.front().extractor_id) {
        std::cerr << "extractor mismatch between caches\n";
        return kExitExtractorMismatch;
    }
    auto gt = load_ground_truth(output_root, *mode);
    auto decisions =
        match_all(reals, altereds, threshold, gt ? &*gt : nullptr, common.jobs);
    if (decisions_out.empty()) {
        dump_decisions_csv(decisions, std::cout);
    } else {
        std::ofstream out(decisions_out);
        dump_decisions_csv(decisions, out);
    }
    return 0;
}

int write_outputs(const std::vector<ThresholdReport>& reports, const fs::path& out_dir,
                  const std::string& format) {
    fs::create_directories(out_dir);
    if (format == "csv" || format == "both") {
        std::ofstream out(out_dir / "report.csv");
        emit_report_csv(reports, out);
    }
    if (format == "json" || format == "both") {
        std::ofstream out(out_dir / "report.json");
        emit_report_json(reports, out);
    }
    {
        std::ofstream out(out_dir / "plotdata.csv");
        emit_plot_data(reports, out);
    }
    {
        std::ofstream out(out_dir / "stats.json");
        emit_stats_json(summarize(reports), out);
    }
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& output_root,
              const std::string& thresholds_csv, const std::string& modes_csv,
              const std::string& fixture, const std::string& format) {
    if (!fixture.empty()) {
        std::ifstream in(fixture);
        if (!in) {
            std::cerr << "cannot open fixture: " << fixture << "\n";
            return 1;
        }
        auto reports = parse_report_csv(in);
        return write_outputs(reports, fs::path(output_root) / "reports", format);
    }

    SweepConfig config;
    config.thresholds = parse_thresholds(thresholds_csv);
    config.modes = parse_modes(modes_csv);
    config.jobs = common.jobs;
    config.deterministic = common.deterministic;

    auto reals = cache_load_file((fs::path(output_root) / "Real.afre").string());
    std::vector<ModeEmbeddings> modes;
    std::vector<GroundTruth> gts;
    gts.reserve(config.modes.size());
    for (Level mode : config.modes) {
        auto altereds =
            cache_load_file((fs::path(output_root) / (to_string(mode) + ".afre")).string());
        if (altereds.front().extractor_id != reals.front().extractor_id) {
            std::cerr << "extractor mismatch: " << reals.front().extractor_id << " vs "
                      << altereds.front().extractor_id << " (" << to_string(mode) << ")\n";
            return kExitExtractorMismatch;
        }
        auto gt = load_ground_truth(fs::path(output_root), mode);
        const GroundTruth* gt_ptr = nullptr;
        if (gt) {
            gts.push_back(std::move(*gt));
            gt_ptr = &gts.back();
        }
        modes.push_back({mode, std::move(altereds), gt_ptr});
    }

    auto reports = sweep(config, reals, modes);
    return write_outputs(reports, fs::path(output_root) / "reports", format);
}

std::vector<ThresholdReport> load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open report: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return parse_report_json(in);
    return parse_report_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fingerprint verification pipeline"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string config_file;
    app.add_option("--config", config_file, "flat key=value config file")->each([](std::string) {});

    std::string dataset_root, output_root, extractor = "baseline", model_path;
    std::string thresholds_csv, modes_csv, fixture, format, mode_str, decisions_out, report_path;
    std::size_t batch_size = 0;
    double threshold = 0.92;
    bool force = false, do_augment = false;
    std::string jobs_str, seed_str;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--dataset", dataset_root, "dataset root with Real/Easy/Medium/Hard");
        cmd->add_option("--out", output_root, "output root");
        cmd->add_option("--seed", seed_str, "RNG seed (default 42)");
        cmd->add_option("--jobs", jobs_str, "worker count (default: logical cores)");
        cmd->add_flag("--deterministic", common.deterministic,
                      "zero timestamps and wall times for byte-identical output");
    };

    auto* ingest = app.add_subcommand("ingest", "relabel, convert and augment a dataset");
    add_common(ingest);
    ingest->add_flag("--force", force, "overwrite existing output");
    ingest->add_flag("--augment", do_augment, "write augmented variants to <Cat>-aug/");

    auto* extract = app.add_subcommand("extract", "compute embeddings into .afre caches");
    add_common(extract);
    extract->add_option("--extractor", extractor, "baseline|backbone");
    extract->add_option("--model-path", model_path, "ONNX backbone path");
    extract->add_option("--batch-size", batch_size, "extraction batch size (default 32)");

    auto* match = app.add_subcommand("match", "all-pairs decisions for one mode");
    add_common(match);
    match->add_option("--mode", mode_str, "easy|medium|hard")->required();
    match->add_option("--threshold", threshold, "decision threshold in (0,1)");
    match->add_option("--decisions", decisions_out, "decision CSV path (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "threshold sweep with reports and stats");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--thresholds", thresholds_csv, "comma list, default 0.92,0.82,0.72");
    sweep_cmd->add_option("--modes", modes_csv, "comma list, default easy,medium,hard");
    sweep_cmd->add_option("--fixture", fixture, "report CSV fixture instead of matching");
    sweep_cmd->add_option("--format", format, "csv|json|both (default both)");

    auto* stats_cmd = app.add_subcommand("stats", "correlations and CIs from a report");
    stats_cmd->add_option("--report", report_path, "report CSV/JSON path");
    stats_cmd->add_option("--fixture", fixture, "report CSV fixture path");
    stats_cmd->add_option("--out-file", decisions_out, "stats JSON path (default stdout)");

    auto* plot_cmd = app.add_subcommand("plotdata", "long-format plot CSV from a report");
    plot_cmd->add_option("--report", report_path, "report CSV/JSON path")->required();
    plot_cmd->add_option("--out-file", decisions_out, "plot CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto config = load_config(config_file);
        common.seed = std::stoull(resolve(seed_str, nullptr, config, "seed", "42"));
        common.jobs = std::stoull(resolve(jobs_str, "AFRNET_JOBS", config, "jobs",
                                          std::to_string(common.jobs)));
        dataset_root = resolve(dataset_root, nullptr, config, "dataset", dataset_root);
        output_root = resolve(output_root, nullptr, config, "out", output_root);
        model_path = resolve(model_path, "AFRNET_MODEL_PATH", config, "model_path", model_path);
        extractor = resolve(extractor == "baseline" ? "" : extractor, nullptr, config, "extractor",
                            "baseline");
        thresholds_csv = resolve(thresholds_csv, nullptr, config, "thresholds", "0.92,0.82,0.72");
        modes_csv = resolve(modes_csv, nullptr, config, "modes", "easy,medium,hard");
        format = resolve(format, nullptr, config, "format", "both");
        if (batch_size == 0)
            batch_size = std::stoull(resolve("", nullptr, config, "batch_size", "32"));

        if (ingest->parsed())
            return cmd_ingest(common, dataset_root, output_root, force, do_augment);
        if (extract->parsed())
            return cmd_extract(common, output_root, extractor, model_path, batch_size);
        if (match->parsed())
            return cmd_match(common, output_root, mode_str, threshold, decisions_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(common, output_root, thresholds_csv, modes_csv, fixture, format);
        if (stats_cmd->parsed()) {
            auto reports = load_report(report_path.empty() ? fixture : report_path);
            StatsSummary summary = summarize(reports);
            if (decisions_out.empty()) {
                emit_stats_json(summary, std::cout);
            } else {
                std::ofstream out(decisions_out);
                emit_stats_json(summary, out);
            }
            return 0;
        }
        if (plot_cmd->parsed()) {
            auto reports = load_report(report_path);
            if (decisions_out.empty()) {
                emit_plot_data(reports, std::cout);
            } else {
                std::ofstream out(decisions_out);
                emit_plot_data(reports, out);
            }
            return 0;
        }
    } catch (const ModelLoadFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModelLoad;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
