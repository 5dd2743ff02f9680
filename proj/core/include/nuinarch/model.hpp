#pragma once

#include <cstdint>

namespace nuinarch {

// Parameters of the conditionally Poisson count recursion
//   X_t | past ~ Poisson(beta + alpha * X_{t-1}),  X_0 = kappa.
struct InarchParams {
    double beta = 1.0;
    double alpha = 0.0;
    std::uint64_t kappa = 0;
};

// Local-to-unity parametrization: the autoregressive coefficient is
// alpha_n = 1 - gamma / n for a series of n transitions.
struct NearlyUnstableSpec {
    double beta = 1.0;
    double gamma = 0.0;
    std::uint64_t n = 1;
};

// Throw std::invalid_argument on out-of-domain parameters.
void validate(const InarchParams& params);
void validate(const NearlyUnstableSpec& spec);

double nearly_unstable_alpha(const NearlyUnstableSpec& spec);

// E(X_t) started from X_0 = kappa.
double marginal_mean(const InarchParams& params, std::uint64_t t);

// Var(X_t) started from X_0 = kappa. Closed form when kappa = 0 and
// alpha < 1; forward recursion otherwise.
double marginal_var(const InarchParams& params, std::uint64_t t);

// Cov(X_t, X_{t+k}) = alpha^k Var(X_t).
double autocov(const InarchParams& params, std::uint64_t t, std::uint64_t k);

// Covariance kernel of the limiting centered mean process at times s and v:
// beta * gamma^{-2} * (gamma*u + exp(-gamma*u) - 1) with u = min(s, v).
// Requires gamma > 0.
double w_cov_limit(double beta, double gamma, double s, double v);

// Asymptotic variance of the least-squares autoregression estimator in the
// stationary regime alpha in [0, 1), derived from the first three stationary
// moments of the count marginal.
double stationary_cls_avar(double beta, double alpha);

// Large-n scale of the sample-path mean at fraction t of the span:
// beta * gamma^{-1} * (1 - exp(-gamma t)), continuously extended to beta*t
// at gamma = 0.
double limiting_mean_scale(const NearlyUnstableSpec& spec, double t);

}  // namespace nuinarch
