#pragma once

#include <cstdint>
#include <vector>

#include "nuinarch/simulate.hpp"

namespace nuinarch {

// Least-squares fit of the autoregressive coefficient with the intercept
// held at a known value.
struct ClsFit {
    double alpha_hat = 0.0;
    double beta_assumed = 0.0;
    std::uint64_t n = 0;  // number of transitions used
};

// alpha_hat = sum X_{t-1} (X_t - beta) / sum X_{t-1}^2 over all transitions.
// Requires at least 3 observations; throws data_error when every predictor
// is zero.
ClsFit cls_alpha(const CountSeries& series, double beta);

enum class CmlMode { joint, beta_only_given_alpha };

struct CmlFit {
    double beta_hat = 0.0;
    double alpha_hat = 0.0;
    double loglik = 0.0;
};

// Conditional maximum likelihood under the Poisson transition density,
// dropping terms free of the parameters. Joint mode maximizes over
// beta > 0, alpha in [0, 1]; the other mode profiles beta at a fixed alpha.
// Throws data_error when no positive count is available, numerical_error on
// non-convergence.
CmlFit cml_fit(const CountSeries& series, CmlMode mode,
               double alpha_fixed = 0.0);

// The parameter-dependent part of the conditional log-likelihood.
double cml_loglik(const CountSeries& series, double beta, double alpha);

// One-step-ahead conditional means beta + alpha * X_{t-1}, t = 1..n.
std::vector<double> predicted_means(const CountSeries& series, double beta,
                                    double alpha);

}  // namespace nuinarch
