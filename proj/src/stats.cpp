#include "afrnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "afrnet/errors.hpp"

namespace afrnet {

namespace {

// Continued-fraction evaluation of the incomplete beta function (Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15, kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
double betainc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_cdf(double t, int df) {
    if (df < 1) throw BadDf("degrees of freedom must be >= 1");
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double tail = 0.5 * betainc(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_name, const std::string& y_name) {
    if (x.size() != y.size() || x.size() < 3)
        throw LengthMismatch("pearson needs two equal-length series with n >= 3");
    std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ConstantSeries("pearson on a constant series");

    CorrelationResult res;
    res.x_name = x_name;
    res.y_name = y_name;
    res.n = n;
    res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::abs(res.r) >= 1.0) {
        res.p_value = 0.0;
    } else {
        double t = res.r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - res.r * res.r);
        res.p_value = 2.0 * t_cdf(-std::abs(t), static_cast<int>(n) - 2);
    }
    return res;
}

ConfidenceInterval ci95(const std::vector<double>& values, Level mode) {
    if (values.size() < 2) throw InsufficientData("ci95 needs n >= 2");
    ConfidenceInterval ci;
    ci.mode = mode;
    ci.mean = mean_of(values);
    ci.sample_std = sample_std(values);
    double half = 1.96 * ci.sample_std / std::sqrt(static_cast<double>(values.size()));
    ci.lower = ci.mean - half;
    ci.upper = ci.mean + half;
    return ci;
}

StatsSummary summarize(const std::vector<ThresholdReport>& reports) {
    std::vector<double> thresholds, accuracies, times;
    std::map<Level, std::vector<double>> per_mode;
    for (const auto& r : reports) {
        thresholds.push_back(r.threshold);
        accuracies.push_back(r.accuracy_pct);
        times.push_back(r.wall_time_s);
        per_mode[r.mode].push_back(r.accuracy_pct);
    }

    StatsSummary s;
    // A correlation is omitted (not zero-filled) when its series is constant
    // or too short -- deterministic runs zero every wall time, for instance.
    auto try_pearson = [&](const std::vector<double>& y, const std::string& name) {
        try {
            s.correlations.push_back(pearson(thresholds, y, "threshold", name));
        } catch (const ConstantSeries&) {
        } catch (const LengthMismatch&) {
        }
    };
    try_pearson(accuracies, "accuracy");
    try_pearson(times, "time");
    for (Level mode : {Level::Easy, Level::Medium, Level::Hard}) {
        auto it = per_mode.find(mode);
        if (it != per_mode.end() && it->second.size() >= 2)
            s.intervals.push_back(ci95(it->second, mode));
    }
    return s;
}

void emit_stats_json(const StatsSummary& summary, std::ostream& out) {
    nlohmann::json j;
    j["correlations"] = nlohmann::json::array();
    for (const auto& c : summary.correlations) {
        j["correlations"].push_back({{"x", c.x_name},
                                     {"y", c.y_name},
                                     {"r", c.r},
                                     {"p_value", c.p_value},
                                     {"n", c.n}});
    }
    j["confidence_intervals"] = nlohmann::json::array();
    for (const auto& ci : summary.intervals) {
        j["confidence_intervals"].push_back({{"mode", to_string(ci.mode)},
                                             {"mean", ci.mean},
                                             {"std", ci.sample_std},
                                             {"lower", ci.lower},
                                             {"upper", ci.upper},
                                             {"level", ConfidenceInterval::kLevel}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace afrnet
