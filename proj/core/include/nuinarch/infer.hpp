#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "nuinarch/empirical.hpp"
#include "nuinarch/estimate.hpp"

namespace nuinarch {

// Accurate inverse standard normal CDF.
double normal_quantile(double p);

enum class CiMethod { stationary_normal, nearly_unstable };

struct CiResult {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    CiMethod method = CiMethod::stationary_normal;
};

struct UrtResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 0.0;
    bool reject = false;
    double zeta = 0.0;
};

// Wald interval alpha_hat -/+ z * sqrt(avar / n) using the stationary
// asymptotic variance evaluated at the fitted coefficient.
CiResult ci_stationary(const CountSeries& series, double beta, double level);

// Supplies the Monte Carlo limit sample for a given gamma. Implementations
// may generate fresh samples, reuse a fixed one, or cache on a grid.
using LimitProvider =
    std::function<std::shared_ptr<const EmpiricalDistribution>(double gamma)>;

// Always returns the given sample, whatever gamma is requested.
LimitProvider fixed_limit_provider(
    std::shared_ptr<const EmpiricalDistribution> dist);

// Generates a sample at the requested gamma on every call.
LimitProvider fresh_limit_provider(double beta, std::uint32_t steps,
                                   std::uint64_t draws, std::uint64_t seed,
                                   unsigned threads = 1);

// Snaps gamma to a uniform grid of the given pitch and caches one sample per
// grid point. Thread-safe; each grid point is generated exactly once.
LimitProvider grid_limit_provider(double beta, double pitch,
                                  std::uint32_t steps, std::uint64_t draws,
                                  std::uint64_t seed, unsigned threads = 1);

// Interval for the autoregressive coefficient under local-to-unity
// asymptotics: the drift is estimated as gamma_hat = max(0, n(1 - alpha_hat))
// and the quantiles of the matching limit law are inverted around alpha_hat.
CiResult ci_nearly_unstable(const CountSeries& series, double beta,
                            const LimitProvider& provider, double level);

// One-sided test of the unit root gamma = 0 against gamma > 0: rejects when
// n(alpha_hat - 1) falls below the zeta-quantile of the null limit sample.
// The p-value is the interpolated empirical CDF at the statistic, so
// reject == (p_value < zeta) identically.
UrtResult unit_root_test(const CountSeries& series, double beta,
                         const EmpiricalDistribution& null_dist, double zeta);

// Same test against a persisted critical-value table.
UrtResult unit_root_test(const CountSeries& series, double beta,
                         const CriticalValueTable& table, double zeta);

}  // namespace nuinarch
