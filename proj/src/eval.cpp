#include "afrnet/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "afrnet/errors.hpp"

namespace afrnet {

double unmatched_rate(std::size_t matched, std::size_t unmatched) {
    if (matched + unmatched == 0) throw EmptyEvaluation("no pairs evaluated");
    return 100.0 * static_cast<double>(unmatched) / static_cast<double>(matched + unmatched);
}

GtMetrics gt_metrics(const std::vector<MatchDecision>& decisions) {
    if (decisions.empty()) throw EmptyEvaluation("no decisions");
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& d : decisions) {
        if (!d.genuine) throw MissingGroundTruth("decision without a genuine label");
        if (d.matched)
            (*d.genuine ? tp : fp)++;
        else
            (*d.genuine ? fn : tn)++;
    }
    GtMetrics m;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(decisions.size());
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw InsufficientData("mean of an empty list");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) throw InsufficientData("sample std needs n >= 2");
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::pair<double, double> similarity_stats(const std::vector<SimilarityScore>& scores) {
    std::vector<double> vals;
    vals.reserve(scores.size());
    for (const auto& s : scores) vals.push_back(s.value);
    return {mean_of(vals), sample_std(vals)};
}

std::vector<ThresholdReport> sweep(const SweepConfig& config,
                                   const std::vector<EmbeddingVector>& reals,
                                   const std::vector<ModeEmbeddings>& modes) {
    if (reals.empty()) throw MissingEmbeddings("no real embeddings");

    std::vector<double> thresholds = config.thresholds;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<ThresholdReport> reports;
    for (Level mode : config.modes) {
        auto it = std::find_if(modes.begin(), modes.end(),
                               [&](const ModeEmbeddings& m) { return m.mode == mode; });
        if (it == modes.end() || it->altereds.empty())
            throw MissingEmbeddings("no embeddings for mode " + to_string(mode));

        // score distribution is threshold-independent within a mode
        std::vector<SimilarityScore> scores;
        scores.reserve(reals.size() * it->altereds.size());
        for (const auto& r : reals)
            for (const auto& a : it->altereds) scores.push_back(cosine(r, a));
        auto [avg, stddev] = similarity_stats(scores);

        for (double t : thresholds) {
            auto start = std::chrono::steady_clock::now();
            auto decisions = match_all(reals, it->altereds, t, it->ground_truth, config.jobs);
            auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

            ThresholdReport rep;
            rep.mode = mode;
            rep.threshold = t;
            for (const auto& d : decisions) (d.matched ? rep.matched_pairs : rep.unmatched_pairs)++;
            rep.accuracy_pct = unmatched_rate(rep.matched_pairs, rep.unmatched_pairs);
            rep.avg_similarity = avg;
            rep.std_similarity = stddev;
            rep.wall_time_s = config.deterministic ? 0.0 : elapsed.count();
            if (it->ground_truth) {
                GtMetrics gm = gt_metrics(decisions);
                rep.gt_accuracy_pct = 100.0 * gm.accuracy;
                rep.precision = gm.precision;
                rep.recall = gm.recall;
                rep.f1 = gm.f1;
            }
            reports.push_back(rep);
        }
    }
    return reports;
}

std::string format_fixed(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    double rounded = std::copysign(std::floor(std::abs(value) * scale + 0.5), value) / scale;
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(decimals);
    out << rounded;
    return out.str();
}

namespace {

std::string format_shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, ptr};
}

std::string opt_field(const std::optional<double>& v, int decimals) {
    return v ? format_fixed(*v, decimals) : std::string{};
}

constexpr const char* kReportHeader =
    "mode,threshold,matched_pairs,unmatched_pairs,accuracy_pct,avg_similarity,"
    "std_similarity,precision,recall,f1,gt_accuracy_pct,time_s";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void emit_report_csv(const std::vector<ThresholdReport>& reports, std::ostream& out) {
    out << kReportHeader << '\n';
    for (const auto& r : reports) {
        out << to_string(r.mode) << ',' << format_shortest(r.threshold) << ',' << r.matched_pairs
            << ',' << r.unmatched_pairs << ',' << format_fixed(r.accuracy_pct, 2) << ','
            << format_fixed(r.avg_similarity, 4) << ',' << format_fixed(r.std_similarity, 4) << ','
            << opt_field(r.precision, 4) << ',' << opt_field(r.recall, 4) << ','
            << opt_field(r.f1, 4) << ',' << opt_field(r.gt_accuracy_pct, 2) << ','
            << format_fixed(r.wall_time_s, 2) << '\n';
    }
}

std::vector<ThresholdReport> parse_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader)
        throw Error("bad report CSV header");
    std::vector<ThresholdReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_fields(line);
        if (f.size() != 12) throw Error("bad report CSV row: " + line);
        ThresholdReport r;
        auto level = parse_level(f[0]);
        if (!level) throw Error("bad mode in report: " + f[0]);
        r.mode = *level;
        r.threshold = std::stod(f[1]);
        r.matched_pairs = std::stoul(f[2]);
        r.unmatched_pairs = std::stoul(f[3]);
        r.accuracy_pct = std::stod(f[4]);
        r.avg_similarity = std::stod(f[5]);
        r.std_similarity = std::stod(f[6]);
        if (!f[7].empty()) r.precision = std::stod(f[7]);
        if (!f[8].empty()) r.recall = std::stod(f[8]);
        if (!f[9].empty()) r.f1 = std::stod(f[9]);
        if (!f[10].empty()) r.gt_accuracy_pct = std::stod(f[10]);
        r.wall_time_s = std::stod(f[11]);
        out.push_back(r);
    }
    return out;
}

void emit_report_json(const std::vector<ThresholdReport>& reports, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["mode"] = to_string(r.mode);
        j["threshold"] = r.threshold;
        j["matched_pairs"] = r.matched_pairs;
        j["unmatched_pairs"] = r.unmatched_pairs;
        j["accuracy_pct"] = r.accuracy_pct;
        j["avg_similarity"] = r.avg_similarity;
        j["std_similarity"] = r.std_similarity;
        j["precision"] = r.precision ? nlohmann::json(*r.precision) : nlohmann::json(nullptr);
        j["recall"] = r.recall ? nlohmann::json(*r.recall) : nlohmann::json(nullptr);
        j["f1"] = r.f1 ? nlohmann::json(*r.f1) : nlohmann::json(nullptr);
        j["gt_accuracy_pct"] =
            r.gt_accuracy_pct ? nlohmann::json(*r.gt_accuracy_pct) : nlohmann::json(nullptr);
        j["time_s"] = r.wall_time_s;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

std::vector<ThresholdReport> parse_report_json(std::istream& in) {
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<ThresholdReport> out;
    for (const auto& j : arr) {
        ThresholdReport r;
        auto level = parse_level(j.at("mode").get<std::string>());
        if (!level) throw Error("bad mode in JSON report");
        r.mode = *level;
        r.threshold = j.at("threshold").get<double>();
        r.matched_pairs = j.at("matched_pairs").get<std::size_t>();
        r.unmatched_pairs = j.at("unmatched_pairs").get<std::size_t>();
        r.accuracy_pct = j.at("accuracy_pct").get<double>();
        r.avg_similarity = j.at("avg_similarity").get<double>();
        r.std_similarity = j.at("std_similarity").get<double>();
        if (!j.at("precision").is_null()) r.precision = j.at("precision").get<double>();
        if (!j.at("recall").is_null()) r.recall = j.at("recall").get<double>();
        if (!j.at("f1").is_null()) r.f1 = j.at("f1").get<double>();
        if (!j.at("gt_accuracy_pct").is_null())
            r.gt_accuracy_pct = j.at("gt_accuracy_pct").get<double>();
        r.wall_time_s = j.at("time_s").get<double>();
        out.push_back(r);
    }
    return out;
}

void emit_plot_data(const std::vector<ThresholdReport>& reports, std::ostream& out) {
    out << "series,x,y\n";
    auto row = [&](const std::string& series, const ThresholdReport& r, double y, int decimals) {
        out << series << ':' << to_string(r.mode) << ',' << format_shortest(r.threshold) << ','
            << format_fixed(y, decimals) << '\n';
    };
    for (const auto& r : reports) row("accuracy", r, r.accuracy_pct, 2);
    for (const auto& r : reports)
        if (r.f1) row("f1", r, *r.f1, 4);
    for (const auto& r : reports) row("time", r, r.wall_time_s, 2);
    for (const auto& r : reports) row("matched", r, static_cast<double>(r.matched_pairs), 0);
    for (const auto& r : reports) row("unmatched", r, static_cast<double>(r.unmatched_pairs), 0);
}

}  // namespace afrnet
