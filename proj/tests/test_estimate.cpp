#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "nuinarch/errors.hpp"
#include "nuinarch/estimate.hpp"
#include "nuinarch/simulate.hpp"

using namespace nuinarch;

namespace {

// Independent check of the least-squares fit: minimize the sum of squared
// one-step residuals by golden-section search over a wide bracket.
// The loss is evaluated in extended precision: locating a smooth minimum by
// comparisons is only reliable to sqrt(machine epsilon) of the bracket, so
// double evaluation would cap the oracle near 1e-8.
double golden_cls(const CountSeries& series, double beta) {
    const auto& x = series.values;
    auto loss = [&](long double alpha) {
        long double q = 0.0L;
        for (std::size_t t = 1; t < x.size(); ++t) {
            const long double r = static_cast<long double>(x[t]) -
                                  static_cast<long double>(beta) -
                                  alpha * static_cast<long double>(x[t - 1]);
            q += r * r;
        }
        return q;
    };
    long double lo = -2.0L;
    long double hi = 3.0L;
    constexpr long double kInvPhi = 0.618033988749894848L;
    long double c = hi - kInvPhi * (hi - lo);
    long double d = lo + kInvPhi * (hi - lo);
    long double fc = loss(c);
    long double fd = loss(d);
    while (hi - lo > 1e-12L) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = loss(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = loss(d);
        }
    }
    return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace

TEST_CASE("least-squares fit pins the constant-series value") {
    CountSeries series;
    series.values.assign(10, 2);
    const ClsFit fit = cls_alpha(series, 1.0);
    CHECK(fit.alpha_hat == 0.5);
    CHECK(fit.beta_assumed == 1.0);
    CHECK(fit.n == 9);
}

TEST_CASE("least-squares fit rejects degenerate input") {
    CountSeries two;
    two.values = {1, 2};
    CHECK_THROWS_AS(cls_alpha(two, 1.0), std::invalid_argument);
    CountSeries zeros;
    zeros.values = {0, 0, 0, 0};
    CHECK_THROWS_AS(cls_alpha(zeros, 1.0), data_error);
    CountSeries ok;
    ok.values = {1, 2, 3};
    CHECK_THROWS_AS(cls_alpha(ok, -1.0), std::invalid_argument);
}

TEST_CASE("least-squares fit agrees with direct loss minimization") {
    for (int rep = 0; rep < 100; ++rep) {
        RngStream rng(1000 + rep, 0);
        const double beta = 0.5 + 1.5 * rng.next_uniform();
        const double alpha = 0.95 * rng.next_uniform();
        const auto series = simulate_inarch(
            InarchParams{beta, alpha, rep % 3 == 0 ? 2ull : 0ull}, 9, rng);
        bool has_predictor = false;
        for (std::size_t i = 0; i + 1 < series.values.size(); ++i)
            if (series.values[i] > 0) { has_predictor = true; break; }
        if (!has_predictor) continue;
        const ClsFit fit = cls_alpha(series, beta);
        const double brute = golden_cls(series, beta);
        CHECK_MESSAGE(std::abs(fit.alpha_hat - brute) < 1e-8,
                      "rep " << rep << ": " << fit.alpha_hat << " vs "
                             << brute);
    }
}

TEST_CASE("shifting the assumed intercept moves the fit by the exact rule") {
    RngStream rng(77, 0);
    const auto series =
        simulate_inarch(InarchParams{1.0, 0.6, 0}, 300, rng);
    const auto& x = series.values;
    double sx = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        sx += static_cast<double>(x[t - 1]);
        sxx += static_cast<double>(x[t - 1]) * static_cast<double>(x[t - 1]);
    }
    const double b1 = 0.8;
    const double b2 = 1.7;
    const ClsFit f1 = cls_alpha(series, b1);
    const ClsFit f2 = cls_alpha(series, b2);
    CHECK(f2.alpha_hat - f1.alpha_hat ==
          doctest::Approx((b1 - b2) * sx / sxx).epsilon(1e-12));
}

TEST_CASE("profile likelihood at alpha zero returns the plain mean") {
    CountSeries series;
    series.values = {4, 1, 3, 0, 2, 6, 2};
    const CmlFit fit = cml_fit(series, CmlMode::beta_only_given_alpha, 0.0);
    double mean = 0.0;
    for (std::size_t t = 1; t < series.values.size(); ++t)
        mean += static_cast<double>(series.values[t]);
    mean /= static_cast<double>(series.values.size() - 1);
    CHECK(fit.beta_hat == doctest::Approx(mean).epsilon(1e-9));
    CHECK(fit.alpha_hat == 0.0);
}

TEST_CASE("likelihood fits refuse all-zero responses") {
    CountSeries series;
    series.values = {3, 0, 0, 0};
    CHECK_THROWS_AS(cml_fit(series, CmlMode::joint), data_error);
}

TEST_CASE("joint likelihood fit lands near truth and dominates a fine grid") {
    RngStream rng(2025, 0);
    const auto series =
        simulate_inarch(InarchParams{1.0, 0.5, 0}, 2000, rng);
    const CmlFit fit = cml_fit(series, CmlMode::joint);
    CHECK(std::abs(fit.beta_hat - 1.0) < 0.15);
    CHECK(std::abs(fit.alpha_hat - 0.5) < 0.05);

    double grid_best = -1e300;
    for (int i = 0; i < 200; ++i) {
        const double beta = 0.05 + (2.0 - 0.05) * i / 199.0;
        for (int j = 0; j < 200; ++j) {
            const double alpha = 0.999 * j / 199.0;
            grid_best =
                std::max(grid_best, cml_loglik(series, beta, alpha));
        }
    }
    CHECK(fit.loglik >= grid_best - 1e-6);

    const CmlFit pinned =
        cml_fit(series, CmlMode::beta_only_given_alpha, 0.3);
    CHECK(fit.loglik >= pinned.loglik);
}

TEST_CASE("one-step-ahead means follow the affine recursion") {
    CountSeries series;
    series.values = {0, 3};
    const auto one = predicted_means(series, 1.0, 0.5);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == 1.0);
    series.values = {0, 3, 4};
    const auto two = predicted_means(series, 1.0, 0.5);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 1.0);
    CHECK(two[1] == 2.5);
    CHECK_THROWS_AS(predicted_means(series, 1.0, 1.5),
                    std::invalid_argument);
}
