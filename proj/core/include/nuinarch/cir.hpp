#pragma once

#include <cstdint>
#include <vector>

#include "nuinarch/empirical.hpp"
#include "nuinarch/rng.hpp"

namespace nuinarch {

// Square-root diffusion dX = (beta - gamma*X) dt + sqrt(X) dB on [0, 1],
// discretized by full-truncation Euler on a uniform grid of `steps` steps.
struct CirParams {
    double beta = 1.0;
    double gamma = 0.0;
    std::uint32_t steps = 5000;
    double x0 = 0.0;
};

void validate(const CirParams& params);

// One discretized trajectory together with the Brownian increments that
// drove it, so path functionals built from the same noise can be evaluated
// after the fact.
struct CirPath {
    std::vector<double> values;      // X_0..X_M, clamped at zero
    std::vector<double> increments;  // dB_0..dB_{M-1}
    double dt = 0.0;
};

CirPath simulate_cir(const CirParams& params, RngStream& rng);

struct LimitDraw {
    double value = 0.0;
};

// Ratio of the left-point Ito sum of X^{3/2} dB to the left-point Riemann
// sum of X^2 dt over the stored path. Throws numerical_error when the
// denominator vanishes.
LimitDraw limit_functional(const CirPath& path);

// Monte Carlo sample of the limit functional. Draw i consumes the stream
// (base.seed(), base.stream_id() + i), so the result is independent of
// `threads` and of draw scheduling. Values are sorted before packaging.
EmpiricalDistribution sample_limit(const CirParams& params,
                                   std::uint64_t draws, const RngStream& base,
                                   unsigned threads = 1);

}  // namespace nuinarch
