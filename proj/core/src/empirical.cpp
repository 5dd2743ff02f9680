#include "nuinarch/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nuinarch/errors.hpp"

namespace nuinarch {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values,
                                             LimitProvenance prov)
    : values_(std::move(values)), prov_(prov) {
    if (values_.empty())
        throw std::invalid_argument("empirical sample must be non-empty");
    for (const double v : values_)
        if (!std::isfinite(v))
            throw numerical_error("empirical sample contains non-finite values");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::quantile(double zeta) const {
    if (!(zeta > 0.0) || !(zeta < 1.0))
        throw std::invalid_argument("quantile level must lie in (0, 1)");
    const std::size_t n = values_.size();
    if (n == 1) return values_[0];
    const double h = zeta * static_cast<double>(n - 1);
    const double fl = std::floor(h);
    const std::size_t i = static_cast<std::size_t>(fl);
    const double frac = h - fl;
    if (frac == 0.0 || i + 1 >= n) return values_[i];
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double EmpiricalDistribution::cdf(double x) const {
    if (std::isnan(x))
        throw std::invalid_argument("cdf argument must not be NaN");
    const auto& v = values_;
    const std::size_t n = v.size();
    if (n == 1) return x < v[0] ? 0.0 : 1.0;
    if (x < v[0]) return 0.0;
    if (x >= v[n - 1]) return 1.0;
    const std::size_t j = static_cast<std::size_t>(
        std::upper_bound(v.begin(), v.end(), x) - v.begin()) - 1;
    double h = static_cast<double>(j);
    if (v[j] < x) h += (x - v[j]) / (v[j + 1] - v[j]);
    return h / static_cast<double>(n - 1);
}

double CriticalValueTable::value_at(double level) const {
    if (entries.empty()) throw std::invalid_argument("table is empty");
    if (!(level >= entries.front().first) ||
        !(level <= entries.back().first))
        throw std::invalid_argument("level outside the tabulated range");
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), level,
        [](const std::pair<double, double>& e, double l) {
            return e.first < l;
        });
    if (it->first == level) return it->second;
    const auto lo = it - 1;
    const double w = (level - lo->first) / (it->first - lo->first);
    return lo->second + w * (it->second - lo->second);
}

double CriticalValueTable::level_at(double value) const {
    if (entries.empty()) throw std::invalid_argument("table is empty");
    if (value <= entries.front().second) return entries.front().first;
    if (value >= entries.back().second) return entries.back().first;
    // last entry whose quantile does not exceed the value
    std::size_t j = entries.size() - 1;
    while (j > 0 && entries[j].second > value) --j;
    if (entries[j].second == value) {
        while (j + 1 < entries.size() && entries[j + 1].second == value) ++j;
        return entries[j].first;
    }
    const double w = (value - entries[j].second) /
                     (entries[j + 1].second - entries[j].second);
    return entries[j].first + w * (entries[j + 1].first - entries[j].first);
}

CriticalValueTable CriticalValueTable::from_distribution(
    const EmpiricalDistribution& dist, const std::vector<double>& levels) {
    CriticalValueTable table;
    table.prov = dist.provenance();
    table.entries.reserve(levels.size());
    for (const double l : levels)
        table.entries.emplace_back(l, dist.quantile(l));
    std::sort(table.entries.begin(), table.entries.end());
    return table;
}

std::vector<double> CriticalValueTable::default_levels() {
    std::vector<double> levels;
    levels.reserve(999);
    for (int k = 1; k <= 999; ++k)
        levels.push_back(static_cast<double>(k) / 1000.0);
    return levels;
}

}  // namespace nuinarch
