#include "nuinarch/cir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "nuinarch/errors.hpp"

namespace nuinarch {

void validate(const CirParams& p) {
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma))
        throw std::invalid_argument("gamma must be a non-negative finite real");
    if (p.steps < 2)
        throw std::invalid_argument("steps must be at least 2");
    if (!(p.x0 >= 0.0) || !std::isfinite(p.x0))
        throw std::invalid_argument("x0 must be a non-negative finite real");
}

CirPath simulate_cir(const CirParams& p, RngStream& rng) {
    validate(p);
    const std::uint32_t m = p.steps;
    CirPath path;
    path.dt = 1.0 / static_cast<double>(m);
    path.values.resize(m + 1);
    path.increments.resize(m);
    const double sqrt_dt = std::sqrt(path.dt);
    double x = p.x0;
    path.values[0] = x;
    for (std::uint32_t i = 0; i < m; ++i) {
        const double sx = std::sqrt(x);
        const double db = rng.next_normal() * sqrt_dt;
        path.increments[i] = db;
        x = x + (p.beta - p.gamma * x) * path.dt + sx * db;
        if (x < 0.0) x = 0.0;
        path.values[i + 1] = x;
    }
    return path;
}

LimitDraw limit_functional(const CirPath& path) {
    if (path.values.size() < 2 ||
        path.increments.size() + 1 != path.values.size() || !(path.dt > 0.0))
        throw std::invalid_argument(
            "path must carry values, matching increments and a positive dt");
    double num = 0.0;
    double den = 0.0;
    const std::size_t m = path.increments.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double x = path.values[i];
        const double sx = std::sqrt(x);
        num += x * sx * path.increments[i];
        den += x * x;
    }
    den *= path.dt;
    if (den == 0.0)
        throw numerical_error(
            "degenerate trajectory: the squared-path integral vanishes");
    return LimitDraw{num / den};
}

namespace {

// Single fused draw; bitwise identical to simulate_cir + limit_functional.
double one_limit_draw(const CirParams& p, RngStream& rng) {
    const std::uint32_t m = p.steps;
    const double dt = 1.0 / static_cast<double>(m);
    const double sqrt_dt = std::sqrt(dt);
    double x = p.x0;
    double num = 0.0;
    double den = 0.0;
    for (std::uint32_t i = 0; i < m; ++i) {
        const double sx = std::sqrt(x);
        const double db = rng.next_normal() * sqrt_dt;
        num += x * sx * db;
        den += x * x;
        x = x + (p.beta - p.gamma * x) * dt + sx * db;
        if (x < 0.0) x = 0.0;
    }
    den *= dt;
    if (den == 0.0)
        throw numerical_error(
            "degenerate trajectory: the squared-path integral vanishes");
    return num / den;
}

}  // namespace

EmpiricalDistribution sample_limit(const CirParams& p, std::uint64_t draws,
                                   const RngStream& base, unsigned threads) {
    validate(p);
    if (draws < 1) throw std::invalid_argument("draws must be at least 1");
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (threads > draws) threads = static_cast<unsigned>(draws);

    std::vector<double> values(draws);
    const std::uint64_t seed = base.seed();
    const std::uint64_t stream0 = base.stream_id();

    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            RngStream rng(seed, stream0 + i);
            values[i] = one_limit_draw(p, rng);
        }
    };

    if (threads == 1) {
        worker(0, draws);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t lo = draws * t / threads;
            const std::uint64_t hi = draws * (t + 1) / threads;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    LimitProvenance prov;
    prov.beta = p.beta;
    prov.gamma = p.gamma;
    prov.steps = p.steps;
    prov.draws = draws;
    prov.seed = seed;
    return EmpiricalDistribution(std::move(values), prov);
}

}  // namespace nuinarch
