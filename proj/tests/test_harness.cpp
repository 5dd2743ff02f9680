#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "nuinarch/empirical.hpp"
#include "nuinarch/harness.hpp"
#include "nuinarch/rng.hpp"

using namespace nuinarch;

namespace {

McConfig tiny_size_config() {
    McConfig cfg;
    cfg.beta = 1.0;
    cfg.ns = {40};
    cfg.zetas = {0.5, 0.05};
    cfg.replications = 200;
    cfg.seed = 31;
    cfg.table_steps = 200;
    cfg.table_draws = 2000;
    return cfg;
}

}  // namespace

TEST_CASE("wilson interval brackets the point estimate and shrinks") {
    auto [lo, hi] = wilson99(50, 100);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
    CHECK(lo > 0.3);
    CHECK(hi < 0.7);
    auto [lo2, hi2] = wilson99(5000, 10000);
    CHECK(hi2 - lo2 < hi - lo);
    auto [zl, zh] = wilson99(0, 50);
    CHECK(std::abs(zl) < 1e-12);
    CHECK(zh > 0.0);
    CHECK(zh < 0.25);
    auto [ol, oh] = wilson99(50, 50);
    CHECK(std::abs(oh - 1.0) < 1e-12);
    CHECK(ol < 1.0);
    CHECK_THROWS_AS(wilson99(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson99(5, 4), std::invalid_argument);
}

TEST_CASE("size experiment produces sane rejection rates") {
    auto report = run_size(tiny_size_config());
    CHECK(report.experiment == "size");
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.metric == "size");
        CHECK(row.replications == 200);
        CHECK(row.scenario.at("n") == 40.0);
        CHECK(row.wilson_low <= row.value);
        CHECK(row.wilson_high >= row.value);
    }
    // At zeta = 0.5 the test rejects roughly half the time; at 0.05 rarely.
    const auto& r50 = report.rows[0].scenario.at("zeta") == 0.5
                          ? report.rows[0]
                          : report.rows[1];
    const auto& r05 = report.rows[0].scenario.at("zeta") == 0.05
                          ? report.rows[0]
                          : report.rows[1];
    CHECK(r50.value > 0.3);
    CHECK(r50.value < 0.7);
    CHECK(r05.value < 0.2);
    CHECK(r05.value < r50.value);
}

TEST_CASE("reports are identical across parallelism settings") {
    auto cfg = tiny_size_config();
    cfg.parallelism = 1;
    auto serial = run_size(cfg);
    cfg.parallelism = 3;
    auto threaded = run_size(cfg);
    CHECK(serial.to_json(true) == threaded.to_json(true));
    CHECK(serial.to_csv() == threaded.to_csv());

    McConfig pcfg;
    pcfg.beta = 1.0;
    pcfg.alphas = {0.9};
    pcfg.ns = {30};
    pcfg.replications = 120;
    pcfg.seed = 77;
    pcfg.table_steps = 200;
    pcfg.table_draws = 1500;
    pcfg.parallelism = 1;
    auto pserial = run_power(pcfg);
    pcfg.parallelism = 4;
    auto pthreaded = run_power(pcfg);
    CHECK(pserial.to_json(true) == pthreaded.to_json(true));

    McConfig ccfg;
    ccfg.beta = 1.0;
    ccfg.alphas = {0.95};
    ccfg.ns = {40};
    ccfg.levels = {0.9};
    ccfg.replications = 60;
    ccfg.seed = 5;
    ccfg.grid_pitch = 1.0;
    ccfg.grid_steps = 100;
    ccfg.grid_draws = 800;
    ccfg.parallelism = 1;
    auto cserial = run_coverage(ccfg);
    ccfg.parallelism = 3;
    auto cthreaded = run_coverage(ccfg);
    CHECK(cserial.to_json(true) == cthreaded.to_json(true));
}

TEST_CASE("coverage experiment stays within the unit interval") {
    McConfig cfg;
    cfg.beta = 1.0;
    cfg.alphas = {0.95};
    cfg.ns = {40};
    cfg.levels = {0.5, 0.95};
    cfg.replications = 80;
    cfg.seed = 13;
    cfg.grid_pitch = 1.0;
    cfg.grid_steps = 100;
    cfg.grid_draws = 800;
    auto report = run_coverage(cfg);
    CHECK(report.experiment == "coverage");
    REQUIRE(report.rows.size() == 2);
    double cov50 = -1.0, cov95 = -1.0;
    for (const auto& row : report.rows) {
        CHECK(row.metric == "coverage");
        CHECK(row.value >= 0.0);
        CHECK(row.value <= 1.0);
        if (row.scenario.at("level") == 0.5) cov50 = row.value;
        if (row.scenario.at("level") == 0.95) cov95 = row.value;
    }
    CHECK(cov50 >= 0.2);
    CHECK(cov50 <= 0.8);
    CHECK(cov95 > cov50);
}

TEST_CASE("scaled estimation errors obey the exact scaling relation") {
    McConfig cfg;
    cfg.beta = 1.0;
    cfg.alphas = {0.9};
    cfg.ns = {60};
    cfg.replications = 150;
    cfg.seed = 21;
    auto by_sqrt = standardized_estimates(cfg, Scaling::sqrt_n);
    auto by_n = standardized_estimates(cfg, Scaling::n);
    REQUIRE(by_sqrt.size() == 150);
    REQUIRE(by_n.size() == 150);
    const double root = std::sqrt(60.0);
    for (std::size_t i = 0; i < by_sqrt.size(); ++i)
        CHECK(by_n[i] == doctest::Approx(root * by_sqrt[i]).epsilon(1e-12));
}

TEST_CASE("report serializations carry the scenario grid") {
    auto report = run_size(tiny_size_config());
    const auto js = report.to_json();
    CHECK(js.find("\"experiment\"") != std::string::npos);
    CHECK(js.find("\"size\"") != std::string::npos);
    CHECK(js.find("\"wall_seconds\"") != std::string::npos);
    const auto canon = report.to_json(true);
    CHECK(canon.find("wall_seconds") == std::string::npos);
    CHECK(canon.find("parallelism") == std::string::npos);
    const auto csv = report.to_csv();
    // Header, then one line per row.
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == report.rows.size() + 1);
    CHECK(csv.find("metric") != std::string::npos);
    CHECK(csv.find("zeta") != std::string::npos);
    CHECK(csv.find("n") != std::string::npos);
}

TEST_CASE("kernel density estimate reproduces the smoothing kernel") {
    // A single observation at zero with unit bandwidth is the standard
    // normal density.
    auto curve = kde({0.0}, 1.0, 257);
    REQUIRE(curve.grid.size() == 257);
    REQUIRE(curve.density.size() == 257);
    const double inv_sqrt_2pi = 0.3989422804014327;
    for (std::size_t i = 0; i < curve.grid.size(); i += 16) {
        const double x = curve.grid[i];
        CHECK(curve.density[i] ==
              doctest::Approx(inv_sqrt_2pi * std::exp(-0.5 * x * x))
                  .epsilon(1e-12));
    }
    CHECK(curve.grid.front() == doctest::Approx(-3.0));
    CHECK(curve.grid.back() == doctest::Approx(3.0));
}

TEST_CASE("kernel density estimate integrates to one") {
    RngStream rng(8, 0);
    std::vector<double> sample;
    for (int i = 0; i < 4000; ++i) sample.push_back(rng.next_normal());
    auto curve = kde(sample);
    REQUIRE(curve.grid.size() == 512);
    double mass = 0.0;
    for (std::size_t i = 1; i < curve.grid.size(); ++i)
        mass += 0.5 * (curve.density[i] + curve.density[i - 1]) *
                (curve.grid[i] - curve.grid[i - 1]);
    CHECK(mass == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("kernel density estimate rejects hopeless inputs") {
    CHECK_THROWS_AS(kde({}), std::invalid_argument);
    CHECK_THROWS_AS(kde({1.0}), std::invalid_argument);       // no spread
    CHECK_THROWS_AS(kde({2.0, 2.0}), std::invalid_argument);  // no spread
    CHECK_THROWS_AS(kde({1.0, 2.0}, 1.0, 1), std::invalid_argument);
    CHECK_NOTHROW(kde({1.0}, 0.5));  // explicit bandwidth needs no spread
    // Non-positive bandwidth falls back to the automatic rule.
    auto automatic = kde({1.0, 2.0, 4.0});
    auto negative = kde({1.0, 2.0, 4.0}, -3.0);
    CHECK(automatic.grid == negative.grid);
    CHECK(automatic.density == negative.density);
}

TEST_CASE("quantile pairs line up against the generating sample") {
    std::vector<double> values;
    for (int i = 1; i <= 50; ++i) values.push_back(static_cast<double>(i));
    LimitProvenance prov;
    prov.beta = 1.0;
    EmpiricalDistribution ref(values, prov);
    auto pairs = qq_pairs(values, ref);
    REQUIRE(pairs.size() == 50);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        // Sample order statistics come back sorted.
        CHECK(pairs[i].second == doctest::Approx(i + 1.0));
        // Against its own empirical law the points hug the diagonal.
        CHECK(std::abs(pairs[i].first - pairs[i].second) <= 0.5);
    }
    CHECK_THROWS_AS(qq_pairs({}, ref), std::invalid_argument);
}
