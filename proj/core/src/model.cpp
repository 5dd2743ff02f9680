#include "nuinarch/model.hpp"

#include <cmath>
#include <stdexcept>

namespace nuinarch {

namespace {

// 1 - alpha^t without cancellation, for alpha in [0, 1].
double one_minus_pow(double alpha, double t) {
    if (alpha == 0.0) return t == 0.0 ? 0.0 : 1.0;
    if (alpha == 1.0) return 0.0;
    return -std::expm1(t * std::log(alpha));
}

}  // namespace

void validate(const InarchParams& p) {
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
        throw std::invalid_argument("alpha must be a non-negative finite real");
    if (p.alpha > 1.0)
        throw std::invalid_argument("alpha must not exceed 1");
}

void validate(const NearlyUnstableSpec& s) {
    if (!(s.beta > 0.0) || !std::isfinite(s.beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (!(s.gamma >= 0.0) || !std::isfinite(s.gamma))
        throw std::invalid_argument("gamma must be a non-negative finite real");
    if (s.n < 1)
        throw std::invalid_argument("n must be at least 1");
    if (s.gamma > static_cast<double>(s.n))
        throw std::invalid_argument("gamma must not exceed n");
}

double nearly_unstable_alpha(const NearlyUnstableSpec& s) {
    validate(s);
    return 1.0 - s.gamma / static_cast<double>(s.n);
}

double marginal_mean(const InarchParams& p, std::uint64_t t) {
    validate(p);
    if (t == 0) return static_cast<double>(p.kappa);
    const double td = static_cast<double>(t);
    const double kap = static_cast<double>(p.kappa);
    if (p.alpha == 1.0) return p.beta * td + kap;
    const double at = std::pow(p.alpha, td);
    return p.beta * one_minus_pow(p.alpha, td) / (1.0 - p.alpha) + at * kap;
}

double marginal_var(const InarchParams& p, std::uint64_t t) {
    validate(p);
    if (t == 0) return 0.0;
    if (p.kappa == 0 && p.alpha < 1.0) {
        const double td = static_cast<double>(t);
        const double a = one_minus_pow(p.alpha, td);
        const double b = one_minus_pow(p.alpha, td + 1.0);
        const double d = 1.0 - p.alpha;
        return p.beta * a * b / (d * d * (1.0 + p.alpha));
    }
    double mean = static_cast<double>(p.kappa);
    double var = 0.0;
    for (std::uint64_t i = 0; i < t; ++i) {
        var = p.beta + p.alpha * mean + p.alpha * p.alpha * var;
        mean = p.beta + p.alpha * mean;
    }
    return var;
}

double autocov(const InarchParams& p, std::uint64_t t, std::uint64_t k) {
    return std::pow(p.alpha, static_cast<double>(k)) * marginal_var(p, t);
}

double w_cov_limit(double beta, double gamma, double s, double v) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be a positive finite real");
    if (!(s >= 0.0) || !(v >= 0.0))
        throw std::invalid_argument("time points must be non-negative");
    const double u = s < v ? s : v;
    const double x = gamma * u;
    if (x < 1e-3) {
        // Maclaurin expansion of (exp(-x) - 1 + x) / x^2, scaled by beta*u^2.
        return beta * u * u *
               (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
    }
    return beta / (gamma * gamma) * (x + std::expm1(-x));
}

double stationary_cls_avar(double beta, double alpha) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1)");
    const double m1 = beta / (1.0 - alpha);
    const double m2 =
        (m1 + beta * beta + 2.0 * alpha * beta * m1) / (1.0 - alpha * alpha);
    const double lam2 = beta * beta + 2.0 * alpha * beta * m1 +
                        alpha * alpha * m2;
    const double lam3_fixed = beta * beta * beta +
                              3.0 * beta * beta * alpha * m1 +
                              3.0 * beta * alpha * alpha * m2;
    const double m3 = (m1 + 3.0 * lam2 + lam3_fixed) /
                      (1.0 - alpha * alpha * alpha);
    const double r = beta * m2 + alpha * m3;
    return r / (m2 * m2);
}

double limiting_mean_scale(const NearlyUnstableSpec& spec, double t) {
    validate(spec);
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("t must be a non-negative finite real");
    if (t == 0.0) return 0.0;
    if (spec.gamma == 0.0) return spec.beta * t;
    return spec.beta / spec.gamma * (-std::expm1(-spec.gamma * t));
}

}  // namespace nuinarch
