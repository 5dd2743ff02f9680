#include "nuinarch/simulate.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nuinarch {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double log_factorial(std::uint64_t k) {
    static const std::array<double, 1024> table = [] {
        std::array<double, 1024> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            acc += std::log(static_cast<long double>(i));
            t[i] = static_cast<double>(acc);
        }
        return t;
    }();
    if (k < table.size()) return table[k];
    const double x = static_cast<double>(k);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return (x + 0.5) * std::log(x) - x + 0.5 * std::log(kTwoPi) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

std::uint64_t poisson_inversion(double lambda, RngStream& rng) {
    const double u = rng.next_uniform();
    std::uint64_t k = 0;
    double p = std::exp(-lambda);
    double cum = p;
    while (u > cum) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cum += p;
        if (k > 200) break;
    }
    return k;
}

// Transformed rejection with squeeze, valid for lambda >= 10.
std::uint64_t poisson_ptrs(double lambda, RngStream& rng) {
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
        const double u = rng.next_uniform() - 0.5;
        const double v = rng.next_uniform();
        const double us = 0.5 - std::abs(u);
        const double kd =
            std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        if (kd > 9.0e18) continue;
        const std::uint64_t k = static_cast<std::uint64_t>(kd);
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kd * log_lambda - lambda - log_factorial(k))
            return k;
    }
}

}  // namespace

double StepPath::value_at(double t) const {
    if (!(t >= 0.0) || !(t <= 1.0))
        throw std::invalid_argument("t must lie in [0, 1]");
    const std::size_t n = values.size() - 1;
    std::size_t i = static_cast<std::size_t>(
        std::floor(t * static_cast<double>(n)));
    if (i > n) i = n;
    return values[i];
}

std::uint64_t poisson_draw(double lambda, RngStream& rng) {
    if (std::isnan(lambda) || std::isinf(lambda) || lambda < 0.0)
        throw std::invalid_argument(
            "poisson intensity must be a non-negative finite real");
    if (lambda == 0.0) return 0;
    if (lambda < 10.0) return poisson_inversion(lambda, rng);
    return poisson_ptrs(lambda, rng);
}

CountSeries simulate_inarch(const InarchParams& params, std::uint64_t n,
                            RngStream& rng) {
    validate(params);
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    CountSeries out;
    out.params_used = params;
    out.values.reserve(n + 1);
    out.values.push_back(params.kappa);
    double prev = static_cast<double>(params.kappa);
    for (std::uint64_t t = 1; t <= n; ++t) {
        const std::uint64_t x =
            poisson_draw(params.beta + params.alpha * prev, rng);
        out.values.push_back(x);
        prev = static_cast<double>(x);
    }
    return out;
}

CountSeries simulate_nu_inarch(const NearlyUnstableSpec& spec,
                               std::uint64_t kappa, RngStream& rng) {
    const double alpha = nearly_unstable_alpha(spec);
    return simulate_inarch(InarchParams{spec.beta, alpha, kappa}, spec.n, rng);
}

StepPath normalize_path(const CountSeries& series) {
    if (series.values.size() < 2)
        throw std::invalid_argument("series must contain at least 2 values");
    const double n = static_cast<double>(series.values.size() - 1);
    StepPath path;
    path.values.reserve(series.values.size());
    for (const std::uint64_t x : series.values)
        path.values.push_back(static_cast<double>(x) / n);
    return path;
}

}  // namespace nuinarch
