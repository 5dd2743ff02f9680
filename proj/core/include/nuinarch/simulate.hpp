#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nuinarch/model.hpp"
#include "nuinarch/rng.hpp"

namespace nuinarch {

// A simulated or ingested count path X_0, ..., X_n.
struct CountSeries {
    std::vector<std::uint64_t> values;
    std::optional<InarchParams> params_used;
};

// Piecewise-constant rescaling of a count path onto [0, 1]:
// value_at(t) = X_{floor(n t)} / n.
struct StepPath {
    std::vector<double> values;  // X_i / n for i = 0..n

    double value_at(double t) const;
    std::size_t segments() const { return values.size() - 1; }
};

// Exact Poisson sampling, valid over the full lambda range up to ~1e9 and
// beyond: sequential inversion below lambda = 10, transformed rejection with
// squeeze above. Throws std::invalid_argument on negative, NaN or infinite
// lambda.
std::uint64_t poisson_draw(double lambda, RngStream& rng);

// Draws X_0 = kappa, then n conditionally Poisson transitions.
CountSeries simulate_inarch(const InarchParams& params, std::uint64_t n,
                            RngStream& rng);

// Same, with alpha pinned to the local-to-unity value 1 - gamma/n.
CountSeries simulate_nu_inarch(const NearlyUnstableSpec& spec,
                               std::uint64_t kappa, RngStream& rng);

StepPath normalize_path(const CountSeries& series);

}  // namespace nuinarch
