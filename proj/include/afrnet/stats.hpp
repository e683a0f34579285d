#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "afrnet/eval.hpp"

namespace afrnet {

struct CorrelationResult {
    std::string x_name;
    std::string y_name;
    double r = 0.0;
    double p_value = 0.0;  // two-tailed
    std::size_t n = 0;
};

struct ConfidenceInterval {
    Level mode = Level::Easy;
    double mean = 0.0;
    double sample_std = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    static constexpr double kLevel = 0.95;
};

// Pearson r with a two-tailed p-value from t = r*sqrt(n-2)/sqrt(1-r^2).
// Throws LengthMismatch / ConstantSeries (n < 3 is a LengthMismatch).
CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_name = "x", const std::string& y_name = "y");

// Normal-approximation interval mean +/- 1.96 * s / sqrt(n), sample std,
// bounds not clamped. Throws InsufficientData for n < 2.
ConfidenceInterval ci95(const std::vector<double>& values, Level mode = Level::Easy);

// Student's t CDF via the regularized incomplete beta function.
// Throws BadDf for df < 1.
double t_cdf(double t, int df);

struct StatsSummary {
    std::vector<CorrelationResult> correlations;
    std::vector<ConfidenceInterval> intervals;
};

// Threshold-vs-accuracy and threshold-vs-time correlations plus the per-mode
// accuracy CIs, computed from a report table.
StatsSummary summarize(const std::vector<ThresholdReport>& reports);

void emit_stats_json(const StatsSummary& summary, std::ostream& out);

}  // namespace afrnet
