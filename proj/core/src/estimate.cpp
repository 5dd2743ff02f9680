#include "nuinarch/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include "nuinarch/errors.hpp"

namespace nuinarch {

namespace {

void require_series(const CountSeries& series) {
    if (series.values.size() < 3)
        throw std::invalid_argument(
            "series must contain at least 3 observations");
}

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a positive finite real");
}

void require_alpha(double alpha) {
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1]");
}

// Derivative of the profile log-likelihood in beta:
// g(beta) = sum y_t / (beta + alpha x_{t-1}) - (number of transitions).
// Strictly decreasing in beta whenever some y_t is positive.
double profile_grad(const CountSeries& series, double beta, double alpha) {
    const auto& x = series.values;
    double g = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double y = static_cast<double>(x[t]);
        if (y == 0.0) continue;
        g += y / (beta + alpha * static_cast<double>(x[t - 1]));
    }
    return g - static_cast<double>(x.size() - 1);
}

// Maximizes the conditional log-likelihood over beta > 0 at fixed alpha by
// safeguarded Newton iteration on the gradient root.
double profile_beta(const CountSeries& series, double alpha) {
    const auto& x = series.values;
    constexpr double kFloor = 1e-12;
    if (profile_grad(series, kFloor, alpha) <= 0.0) return kFloor;

    double hi = 1.0;
    for (int i = 0; i < 200 && profile_grad(series, hi, alpha) > 0.0; ++i)
        hi *= 2.0;
    if (profile_grad(series, hi, alpha) > 0.0)
        throw numerical_error("intercept likelihood has no finite maximizer");

    double lo = kFloor;
    double beta = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        double g = 0.0;
        double gp = 0.0;
        for (std::size_t t = 1; t < x.size(); ++t) {
            const double y = static_cast<double>(x[t]);
            if (y == 0.0) continue;
            const double lam = beta + alpha * static_cast<double>(x[t - 1]);
            g += y / lam;
            gp -= y / (lam * lam);
        }
        g -= static_cast<double>(x.size() - 1);
        if (g > 0.0) lo = beta; else hi = beta;
        double next = gp < 0.0 ? beta - g / gp : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - beta) <= 1e-12 * std::max(1.0, beta)) {
            beta = next;
            break;
        }
        beta = next;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return beta;
}

}  // namespace

ClsFit cls_alpha(const CountSeries& series, double beta) {
    require_series(series);
    require_beta(beta);
    const auto& x = series.values;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double prev = static_cast<double>(x[t - 1]);
        sxy += prev * (static_cast<double>(x[t]) - beta);
        sxx += prev * prev;
    }
    if (sxx == 0.0)
        throw data_error(
            "least squares undefined: every lagged predictor is zero");
    return ClsFit{sxy / sxx, beta, x.size() - 1};
}

double cml_loglik(const CountSeries& series, double beta, double alpha) {
    require_series(series);
    require_beta(beta);
    require_alpha(alpha);
    const auto& x = series.values;
    double ll = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double lam = beta + alpha * static_cast<double>(x[t - 1]);
        const double y = static_cast<double>(x[t]);
        ll += (y > 0.0 ? y * std::log(lam) : 0.0) - lam;
    }
    return ll;
}

CmlFit cml_fit(const CountSeries& series, CmlMode mode, double alpha_fixed) {
    require_series(series);
    const auto& x = series.values;
    bool any_positive = false;
    for (std::size_t t = 1; t < x.size(); ++t)
        if (x[t] > 0) { any_positive = true; break; }
    if (!any_positive)
        throw data_error(
            "likelihood degenerate: every response count is zero");

    if (mode == CmlMode::beta_only_given_alpha) {
        require_alpha(alpha_fixed);
        const double beta = profile_beta(series, alpha_fixed);
        return CmlFit{beta, alpha_fixed, cml_loglik(series, beta, alpha_fixed)};
    }

    // The log-likelihood is jointly concave in (beta, alpha), so the profile
    // in alpha is concave; a coarse scan brackets the peak and golden-section
    // refinement closes in on it.
    auto profile_ll = [&](double alpha) {
        return cml_loglik(series, profile_beta(series, alpha), alpha);
    };

    constexpr int kScan = 40;
    int best = 0;
    double best_ll = profile_ll(0.0);
    for (int j = 1; j <= kScan; ++j) {
        const double ll = profile_ll(static_cast<double>(j) / kScan);
        if (ll > best_ll) {
            best_ll = ll;
            best = j;
        }
    }
    double lo = static_cast<double>(best > 0 ? best - 1 : 0) / kScan;
    double hi = static_cast<double>(best < kScan ? best + 1 : kScan) / kScan;

    constexpr double kInvPhi = 0.6180339887498949;
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = profile_ll(c);
    double fd = profile_ll(d);
    int iter = 0;
    while (hi - lo > 1e-10 && iter++ < 200) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = profile_ll(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = profile_ll(d);
        }
    }
    if (iter >= 200)
        throw numerical_error("likelihood maximization failed to converge");
    const double alpha = 0.5 * (lo + hi);
    const double beta = profile_beta(series, alpha);
    return CmlFit{beta, alpha, cml_loglik(series, beta, alpha)};
}

std::vector<double> predicted_means(const CountSeries& series, double beta,
                                    double alpha) {
    if (series.values.size() < 2)
        throw std::invalid_argument(
            "series must contain at least 2 observations");
    require_beta(beta);
    require_alpha(alpha);
    const auto& x = series.values;
    std::vector<double> out;
    out.reserve(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t)
        out.push_back(beta + alpha * static_cast<double>(x[t - 1]));
    return out;
}

}  // namespace nuinarch
