#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace testutil {

inline double ulp_of(double x) {
    const double ax = std::abs(x);
    if (ax == 0.0) return std::numeric_limits<double>::denorm_min();
    return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

inline bool close_ulps(double a, double b, double ulps) {
    if (a == b) return true;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= ulps * ulp_of(scale);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace testutil
