#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace nuinarch {

// Identity of a Monte Carlo sample of the limit law: which parameters and
// which stream produced it. Compared verbatim when a persisted table is
// matched against a request.
struct LimitProvenance {
    double beta = 0.0;
    double gamma = 0.0;
    std::uint32_t steps = 0;
    std::uint64_t draws = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const LimitProvenance&,
                           const LimitProvenance&) = default;
};

// A sorted Monte Carlo sample with interpolation-based quantile and CDF.
// The two are exact functional inverses of one another: for any x in the
// sample range, quantile(cdf(x)) == x up to rounding, which makes the
// rejection rule "statistic below the zeta-quantile" and the p-value rule
// "cdf below zeta" equivalent by construction.
class EmpiricalDistribution {
public:
    EmpiricalDistribution(std::vector<double> values, LimitProvenance prov);

    // Type-7 interpolated order statistic at rank (len-1)*zeta + 1.
    // Requires zeta in (0, 1).
    double quantile(double zeta) const;

    // Piecewise-linear CDF on [0, 1]; at a tied sample value, returns the
    // maximal plotting position so that quantile() inverts it.
    double cdf(double x) const;

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const LimitProvenance& provenance() const { return prov_; }

private:
    std::vector<double> values_;
    LimitProvenance prov_;
};

// A persisted grid of (level, quantile) pairs with the provenance of the
// sample it was cut from.
struct CriticalValueTable {
    LimitProvenance prov;
    std::vector<std::pair<double, double>> entries;  // sorted by level

    // Quantile at the given level: exact on grid points, linear in between.
    double value_at(double level) const;

    // Inverse lookup: the level whose quantile equals the given value,
    // clamped to the grid range.
    double level_at(double value) const;

    static CriticalValueTable from_distribution(
        const EmpiricalDistribution& dist, const std::vector<double>& levels);

    // 0.001 through 0.999 in steps of 0.001.
    static std::vector<double> default_levels();
};

}  // namespace nuinarch
