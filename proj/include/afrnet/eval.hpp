#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afrnet/matcher.hpp"

namespace afrnet {

struct ThresholdReport {
    Level mode = Level::Easy;
    double threshold = 0.0;
    std::size_t matched_pairs = 0;
    std::size_t unmatched_pairs = 0;
    double accuracy_pct = 0.0;  // 100 * unmatched / total
    std::optional<double> gt_accuracy_pct;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    double avg_similarity = 0.0;
    double std_similarity = 0.0;
    double wall_time_s = 0.0;

    bool operator==(const ThresholdReport&) const = default;
};

struct SweepConfig {
    std::vector<double> thresholds = {0.92, 0.82, 0.72};  // normalized descending
    std::vector<Level> modes = {Level::Easy, Level::Medium, Level::Hard};
    std::size_t jobs = 1;
    bool deterministic = false;  // zero wall times
};

// 100 * unmatched / (matched + unmatched). Throws EmptyEvaluation.
double unmatched_rate(std::size_t matched, std::size_t unmatched);

struct GtMetrics {
    double accuracy = 0.0;
    std::optional<double> precision;  // absent when TP+FP == 0
    std::optional<double> recall;     // absent when TP+FN == 0
    std::optional<double> f1;         // absent when P or R absent or P+R == 0
};
GtMetrics gt_metrics(const std::vector<MatchDecision>& decisions);

// Arithmetic mean and sample (n-1) standard deviation.
std::pair<double, double> similarity_stats(const std::vector<SimilarityScore>& scores);
double mean_of(const std::vector<double>& xs);
double sample_std(const std::vector<double>& xs);

struct ModeEmbeddings {
    Level mode;
    std::vector<EmbeddingVector> altereds;
    const GroundTruth* ground_truth = nullptr;  // optional
};

// One report per (mode, threshold); modes in Easy->Medium->Hard order,
// thresholds descending. Throws MissingEmbeddings.
std::vector<ThresholdReport> sweep(const SweepConfig& config,
                                   const std::vector<EmbeddingVector>& reals,
                                   const std::vector<ModeEmbeddings>& modes);

// Round-half-up fixed formatting used for all report output.
std::string format_fixed(double value, int decimals);

// CSV header: mode,threshold,matched_pairs,unmatched_pairs,accuracy_pct,
// avg_similarity,std_similarity,precision,recall,f1,gt_accuracy_pct,time_s
void emit_report_csv(const std::vector<ThresholdReport>& reports, std::ostream& out);
std::vector<ThresholdReport> parse_report_csv(std::istream& in);

void emit_report_json(const std::vector<ThresholdReport>& reports, std::ostream& out);
std::vector<ThresholdReport> parse_report_json(std::istream& in);

// Long-format CSV series,x,y; absent metrics are skipped.
void emit_plot_data(const std::vector<ThresholdReport>& reports, std::ostream& out);

}  // namespace afrnet
