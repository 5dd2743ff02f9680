#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nuinarch/empirical.hpp"

namespace nuinarch {

// Shared configuration for the Monte Carlo experiments. Scenario axes that
// an experiment does not use are ignored by it.
struct McConfig {
    double beta = 1.0;
    std::uint64_t kappa = 0;
    std::vector<double> alphas;         // coverage and power scenarios
    std::vector<std::uint64_t> ns;      // sample sizes (transitions per series)
    std::vector<double> levels;         // confidence levels for coverage
    std::vector<double> zetas;          // significance levels for size
    double zeta = 0.05;                 // significance level for power

    std::uint64_t replications = 10000;
    std::uint64_t seed = 0;
    unsigned parallelism = 0;           // 0 resolves to the hardware count

    // Null-law sample used by the test-based experiments.
    std::uint32_t table_steps = 2000;
    std::uint64_t table_draws = 100000;

    // Per-gamma samples used by the interval experiments, cached on a grid.
    double grid_pitch = 0.5;
    std::uint32_t grid_steps = 800;
    std::uint64_t grid_draws = 10000;
};

struct ExperimentRow {
    std::map<std::string, double> scenario;  // axis name -> value
    std::string metric;                      // "coverage", "size" or "power"
    double value = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    std::uint64_t replications = 0;
};

struct ExperimentReport {
    std::string experiment;
    McConfig config;
    std::vector<ExperimentRow> rows;
    std::string notes;
    double wall_seconds = 0.0;

    // canonical=true omits timing and thread count, leaving only fields that
    // are a pure function of the configuration and seed.
    std::string to_json(bool canonical = false) const;
    std::string to_csv() const;
};

// 99% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson99(std::uint64_t successes,
                                   std::uint64_t trials);

// Empirical coverage of the local-to-unity intervals over
// alphas x ns x levels. Each replication re-estimates the drift and pulls
// the matching grid sample.
ExperimentReport run_coverage(const McConfig& config);

// Rejection rate of the unit-root test under the null over ns x zetas.
ExperimentReport run_size(const McConfig& config);

// Rejection rate at cfg.zeta under stationary alternatives over ns x alphas.
ExperimentReport run_power(const McConfig& config);

enum class Scaling { sqrt_n, n };

// Replication-order sample of scaled estimation errors
// (n or sqrt(n)) * (alpha_hat - alpha) at the first alpha/n scenario.
std::vector<double> standardized_estimates(const McConfig& config,
                                           Scaling scaling);

struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> density;
};

// Gaussian kernel density estimate on 512 evenly spaced points spanning the
// sample plus three bandwidths on each side. bandwidth <= 0 selects the
// normal-reference rule 1.06 * sd * len^{-1/5}, which needs at least two
// distinct observations.
DensityCurve kde(const std::vector<double>& sample, double bandwidth = 0.0,
                 std::size_t grid_size = 512);

// Quantile-quantile pairs (reference quantile, sample order statistic) at
// plotting positions (i - 0.5) / len.
std::vector<std::pair<double, double>> qq_pairs(
    const std::vector<double>& sample, const EmpiricalDistribution& reference);

}  // namespace nuinarch
