#include "nuinarch/infer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "nuinarch/cir.hpp"
#include "nuinarch/errors.hpp"
#include "nuinarch/model.hpp"

namespace nuinarch {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

bool beta_matches(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double rational_normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("probability must lie in (0, 1)");
    // Work in the lower tail where erfc keeps full precision; 1 - p is exact
    // for p >= 0.5, so reflection costs nothing and enforces symmetry.
    if (p > 0.5) return -normal_quantile(1.0 - p);
    double x = rational_normal_quantile(p);
    // One Halley refinement pushes the rational approximation to near
    // machine precision.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

CiResult ci_stationary(const CountSeries& series, double beta, double level) {
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    const ClsFit fit = cls_alpha(series, beta);
    const double avar = stationary_cls_avar(beta, fit.alpha_hat);
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(avar / static_cast<double>(fit.n));
    return CiResult{fit.alpha_hat - half, fit.alpha_hat + half, level,
                    CiMethod::stationary_normal};
}

LimitProvider fixed_limit_provider(
    std::shared_ptr<const EmpiricalDistribution> dist) {
    if (!dist) throw std::invalid_argument("provider needs a sample");
    return [dist](double) { return dist; };
}

LimitProvider fresh_limit_provider(double beta, std::uint32_t steps,
                                   std::uint64_t draws, std::uint64_t seed,
                                   unsigned threads) {
    return [=](double gamma) {
        CirParams p;
        p.beta = beta;
        p.gamma = gamma;
        p.steps = steps;
        return std::make_shared<const EmpiricalDistribution>(
            sample_limit(p, draws, RngStream(seed, 0), threads));
    };
}

namespace {

struct GridCell {
    std::once_flag flag;
    std::shared_ptr<const EmpiricalDistribution> dist;
};

struct GridCache {
    std::mutex mu;
    std::unordered_map<long long, std::shared_ptr<GridCell>> cells;
};

}  // namespace

LimitProvider grid_limit_provider(double beta, double pitch,
                                  std::uint32_t steps, std::uint64_t draws,
                                  std::uint64_t seed, unsigned threads) {
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw std::invalid_argument("pitch must be a positive finite real");
    auto cache = std::make_shared<GridCache>();
    return [=](double gamma) {
        if (!(gamma >= 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument(
                "gamma must be a non-negative finite real");
        const long long k = std::llround(gamma / pitch);
        std::shared_ptr<GridCell> cell;
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto& slot = cache->cells[k];
            if (!slot) slot = std::make_shared<GridCell>();
            cell = slot;
        }
        std::call_once(cell->flag, [&] {
            CirParams p;
            p.beta = beta;
            p.gamma = static_cast<double>(k) * pitch;
            p.steps = steps;
            const std::uint64_t cell_seed =
                derive_seed(seed, "gamma-grid/" + std::to_string(k));
            cell->dist = std::make_shared<const EmpiricalDistribution>(
                sample_limit(p, draws, RngStream(cell_seed, 0), threads));
        });
        return cell->dist;
    };
}

CiResult ci_nearly_unstable(const CountSeries& series, double beta,
                            const LimitProvider& provider, double level) {
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    if (!provider) throw std::invalid_argument("provider must be callable");
    const ClsFit fit = cls_alpha(series, beta);
    const double n = static_cast<double>(fit.n);
    const double gamma_hat = std::max(0.0, n * (1.0 - fit.alpha_hat));
    const auto dist = provider(gamma_hat);
    if (!dist) throw numerical_error("limit provider returned no sample");
    const double q_hi = dist->quantile(0.5 * (1.0 + level));
    const double q_lo = dist->quantile(0.5 * (1.0 - level));
    return CiResult{fit.alpha_hat - q_hi / n, fit.alpha_hat - q_lo / n, level,
                    CiMethod::nearly_unstable};
}

UrtResult unit_root_test(const CountSeries& series, double beta,
                         const EmpiricalDistribution& null_dist, double zeta) {
    if (!(zeta > 0.0) || !(zeta < 1.0))
        throw std::invalid_argument("zeta must lie in (0, 1)");
    const auto& prov = null_dist.provenance();
    if (prov.gamma != 0.0)
        throw data_error("null sample must be generated at gamma = 0");
    if (!beta_matches(prov.beta, beta))
        throw data_error("null sample was generated at a different beta (" +
                         std::to_string(prov.beta) + " vs " +
                         std::to_string(beta) + ")");
    const ClsFit fit = cls_alpha(series, beta);
    const double stat =
        static_cast<double>(fit.n) * (fit.alpha_hat - 1.0);
    const double q = null_dist.quantile(zeta);
    const double p = null_dist.cdf(stat);
    return UrtResult{stat, q, p, stat < q, zeta};
}

UrtResult unit_root_test(const CountSeries& series, double beta,
                         const CriticalValueTable& table, double zeta) {
    if (!(zeta > 0.0) || !(zeta < 1.0))
        throw std::invalid_argument("zeta must lie in (0, 1)");
    if (table.prov.gamma != 0.0)
        throw data_error("critical-value table must be generated at gamma = 0");
    if (!beta_matches(table.prov.beta, beta))
        throw data_error(
            "critical-value table was generated at a different beta (" +
            std::to_string(table.prov.beta) + " vs " + std::to_string(beta) +
            ")");
    const ClsFit fit = cls_alpha(series, beta);
    const double stat =
        static_cast<double>(fit.n) * (fit.alpha_hat - 1.0);
    const double q = table.value_at(zeta);
    const double p = table.level_at(stat);
    return UrtResult{stat, q, p, stat < q, zeta};
}

}  // namespace nuinarch
