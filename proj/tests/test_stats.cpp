#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "afrnet/errors.hpp"
#include "afrnet/stats.hpp"

using namespace afrnet;

namespace {

std::vector<ThresholdReport> reference_table() {
    std::ifstream fixture(std::string(AFRNET_SOURCE_DIR) + "/fixtures/sweep_reference.csv");
    REQUIRE(fixture);
    return parse_report_csv(fixture);
}

}  // namespace

TEST_CASE("t_cdf: symmetry and anchors") {
    CHECK(t_cdf(0.0, 5) == 0.5);
    // df=1 closed form: 1/2 + atan(t)/pi
    for (double t : {-3.0, -1.0, 0.5, 1.0, 10.0})
        CHECK(t_cdf(t, 1) == doctest::Approx(0.5 + std::atan(t) / std::acos(-1.0)).epsilon(1e-9));
    CHECK(t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-9));

    // two-tailed p for the published accuracy correlation
    double p = 2.0 * t_cdf(-8.05, 7);
    CHECK(p == doctest::Approx(0.00009).epsilon(0.1));

    for (int df : {1, 2, 7, 30, 1000})
        for (double t : {-50.0, -2.5, -0.1, 0.0, 0.3, 4.0, 50.0})
            CHECK(t_cdf(t, df) + t_cdf(-t, df) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(t_cdf(1.0, 0), BadDf);
}

TEST_CASE("pearson: exact linearity") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    auto res = pearson(x, y);
    CHECK(res.r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.p_value <= 1e-12);

    std::vector<double> neg;
    for (double v : x) neg.push_back(-3 * v + 7);
    CHECK(pearson(x, neg).r == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson: published correlations from the threshold sweep table") {
    auto reports = reference_table();
    std::vector<double> th, acc, time;
    for (const auto& r : reports) {
        th.push_back(r.threshold);
        acc.push_back(r.accuracy_pct);
        time.push_back(r.wall_time_s);
    }

    auto a = pearson(th, acc, "threshold", "accuracy");
    CHECK(a.r == doctest::Approx(0.95).epsilon(0.0053));
    CHECK(a.p_value <= 1e-4);
    CHECK(a.n == 9);

    auto t = pearson(th, time, "threshold", "time");
    CHECK(t.r == doctest::Approx(-0.89).epsilon(0.012));
    CHECK(t.p_value == doctest::Approx(0.0014).epsilon(0.36));
}

TEST_CASE("pearson: symmetry and affine invariance (property)") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 12; ++i) {
            x.push_back(dist(rng));
            y.push_back(dist(rng));
        }
        auto xy = pearson(x, y);
        CHECK(pearson(y, x).r == xy.r);

        double a = dist(rng), b = std::abs(dist(rng)) + 0.1;
        std::vector<double> mapped;
        for (double v : x) mapped.push_back(a + b * v);
        CHECK(pearson(mapped, y).r == doctest::Approx(xy.r).epsilon(1e-9));
    }
}

TEST_CASE("pearson: errors") {
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), LengthMismatch);
    CHECK_THROWS_AS(pearson({1, 2, 3}, {1, 2}), LengthMismatch);
    CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), ConstantSeries);
}

TEST_CASE("ci95: regenerates the published per-mode intervals") {
    struct Row {
        Level mode;
        std::vector<double> acc;
        double mean, stddev, lower, upper;
    };
    // accuracy columns per mode at full 2-decimal precision
    std::vector<Row> rows = {
        {Level::Easy, {96.69, 53.33, 7.86}, 52.63, 44.42, 2.36, 102.89},
        {Level::Medium, {98.76, 73.68, 27.05}, 66.50, 36.39, 25.32, 107.68},
        {Level::Hard, {99.54, 83.26, 29.51}, 70.77, 36.65, 29.30, 112.24},
    };
    for (const auto& row : rows) {
        auto ci = ci95(row.acc, row.mode);
        CHECK(format_fixed(ci.mean, 2) == format_fixed(row.mean, 2));
        CHECK(format_fixed(ci.sample_std, 2) == format_fixed(row.stddev, 2));
        CHECK(format_fixed(ci.lower, 2) == format_fixed(row.lower, 2));
        CHECK(format_fixed(ci.upper, 2) == format_fixed(row.upper, 2));
        CHECK(ci.lower <= ci.mean);
        CHECK(ci.mean <= ci.upper);
        CHECK(ci.upper > 100.0);  // the published upper bounds exceed 100%
    }
}

TEST_CASE("ci95: degenerate spread and errors") {
    auto ci = ci95({5, 5, 5});
    CHECK(ci.mean == 5.0);
    CHECK(ci.sample_std == 0.0);
    CHECK(ci.lower == 5.0);
    CHECK(ci.upper == 5.0);

    CHECK_THROWS_AS(ci95({1.0}), InsufficientData);
}

TEST_CASE("ci95: symmetric about the mean with the stated width") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> vals;
        for (int i = 0; i < 3 + static_cast<int>(rng() % 10); ++i) vals.push_back(dist(rng));
        auto ci = ci95(vals);
        CHECK(ci.upper - ci.mean == doctest::Approx(ci.mean - ci.lower).epsilon(1e-12));
        double width = 2 * 1.96 * ci.sample_std / std::sqrt(static_cast<double>(vals.size()));
        CHECK(ci.upper - ci.lower == doctest::Approx(width).epsilon(1e-12));
    }
}

TEST_CASE("summarize + stats JSON") {
    auto summary = summarize(reference_table());
    REQUIRE(summary.correlations.size() == 2);
    REQUIRE(summary.intervals.size() == 3);
    CHECK(summary.correlations[0].y_name == "accuracy");
    CHECK(summary.correlations[1].y_name == "time");

    std::stringstream ss;
    emit_stats_json(summary, ss);
    CHECK(ss.str().find("\"r\"") != std::string::npos);
    CHECK(ss.str().find("confidence_intervals") != std::string::npos);
}
