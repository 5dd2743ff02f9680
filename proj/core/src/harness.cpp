#include "nuinarch/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "nuinarch/cir.hpp"
#include "nuinarch/errors.hpp"
#include "nuinarch/infer.hpp"
#include "nuinarch/model.hpp"
#include "nuinarch/rng.hpp"
#include "nuinarch/simulate.hpp"

namespace nuinarch {

namespace {

constexpr double kWilsonZ = 2.5758293035489004;  // 99.5th normal percentile

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(r) for r in [0, reps) over a fixed partition into contiguous
// chunks. Results must be written by index; nothing about the outcome may
// depend on the thread count.
template <typename F>
void parallel_for(std::uint64_t reps, unsigned threads, F&& fn) {
    if (threads <= 1 || reps < 2) {
        for (std::uint64_t r = 0; r < reps; ++r) fn(r);
        return;
    }
    if (threads > reps) threads = static_cast<unsigned>(reps);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = reps * t / threads;
        const std::uint64_t hi = reps * (t + 1) / threads;
        pool.emplace_back([lo, hi, &fn] {
            for (std::uint64_t r = lo; r < hi; ++r) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

void require_common(const McConfig& cfg) {
    if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta))
        throw std::invalid_argument("beta must be a positive finite real");
    if (cfg.replications < 1)
        throw std::invalid_argument("replications must be at least 1");
}

ExperimentRow make_row(std::map<std::string, double> scenario,
                       std::string metric, std::uint64_t hits,
                       std::uint64_t reps) {
    ExperimentRow row;
    row.scenario = std::move(scenario);
    row.metric = std::move(metric);
    row.replications = reps;
    row.value = static_cast<double>(hits) / static_cast<double>(reps);
    const auto ci = wilson99(hits, reps);
    row.wilson_low = ci.first;
    row.wilson_high = ci.second;
    return row;
}

nlohmann::json config_json(const McConfig& cfg, bool canonical) {
    nlohmann::json j;
    j["beta"] = cfg.beta;
    j["kappa"] = cfg.kappa;
    j["alphas"] = cfg.alphas;
    j["ns"] = cfg.ns;
    j["levels"] = cfg.levels;
    j["zetas"] = cfg.zetas;
    j["zeta"] = cfg.zeta;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;
    j["table_steps"] = cfg.table_steps;
    j["table_draws"] = cfg.table_draws;
    j["grid_pitch"] = cfg.grid_pitch;
    j["grid_steps"] = cfg.grid_steps;
    j["grid_draws"] = cfg.grid_draws;
    if (!canonical) j["parallelism"] = cfg.parallelism;
    return j;
}

}  // namespace

std::pair<double, double> wilson99(std::uint64_t successes,
                                   std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (successes > trials)
        throw std::invalid_argument("successes must not exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

std::string ExperimentReport::to_json(bool canonical) const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["notes"] = notes;
    j["config"] = config_json(config, canonical);
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json jr;
        jr["metric"] = row.metric;
        jr["scenario"] = row.scenario;
        jr["value"] = row.value;
        jr["wilson_low"] = row.wilson_low;
        jr["wilson_high"] = row.wilson_high;
        jr["replications"] = row.replications;
        jrows.push_back(std::move(jr));
    }
    j["rows"] = std::move(jrows);
    if (!canonical) j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
    std::set<std::string> keys;
    for (const auto& row : rows)
        for (const auto& [k, v] : row.scenario) keys.insert(k);
    std::ostringstream out;
    out << "experiment,metric";
    for (const auto& k : keys) out << ',' << k;
    out << ",value,wilson_low,wilson_high,replications\n";
    for (const auto& row : rows) {
        out << experiment << ',' << row.metric;
        for (const auto& k : keys) {
            out << ',';
            const auto it = row.scenario.find(k);
            if (it != row.scenario.end()) out << fmt(it->second);
        }
        out << ',' << fmt(row.value) << ',' << fmt(row.wilson_low) << ','
            << fmt(row.wilson_high) << ',' << row.replications << '\n';
    }
    return out.str();
}

ExperimentReport run_size(const McConfig& cfg) {
    require_common(cfg);
    if (cfg.ns.empty())
        throw std::invalid_argument("size experiment needs sample sizes");
    if (cfg.zetas.empty())
        throw std::invalid_argument("size experiment needs zeta levels");
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned threads = resolve_threads(cfg.parallelism);

    CirParams null_params;
    null_params.beta = cfg.beta;
    null_params.gamma = 0.0;
    null_params.steps = cfg.table_steps;
    const auto null_dist = sample_limit(
        null_params, cfg.table_draws,
        RngStream(derive_seed(cfg.seed, "size/table"), 0), threads);

    ExperimentReport report;
    report.experiment = "size";
    report.config = cfg;
    report.notes = "null rejection rate of the unit-root test; one shared "
                   "null sample of " + std::to_string(cfg.table_draws) +
                   " draws at " + std::to_string(cfg.table_steps) + " steps";

    for (const std::uint64_t n : cfg.ns) {
        const std::uint64_t sim_seed =
            derive_seed(cfg.seed, "size/n=" + std::to_string(n) + "/sim");
        std::vector<double> stats(cfg.replications);
        parallel_for(cfg.replications, threads, [&](std::uint64_t r) {
            RngStream rng(sim_seed, r);
            const auto series = simulate_inarch(
                InarchParams{cfg.beta, 1.0, cfg.kappa}, n, rng);
            const ClsFit fit = cls_alpha(series, cfg.beta);
            stats[r] = static_cast<double>(fit.n) * (fit.alpha_hat - 1.0);
        });
        for (const double zeta : cfg.zetas) {
            const double q = null_dist.quantile(zeta);
            std::uint64_t hits = 0;
            for (const double s : stats) hits += s < q ? 1 : 0;
            report.rows.push_back(make_row(
                {{"beta", cfg.beta},
                 {"n", static_cast<double>(n)},
                 {"zeta", zeta}},
                "size", hits, cfg.replications));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

ExperimentReport run_power(const McConfig& cfg) {
    require_common(cfg);
    if (cfg.ns.empty())
        throw std::invalid_argument("power experiment needs sample sizes");
    if (cfg.alphas.empty())
        throw std::invalid_argument("power experiment needs alternatives");
    if (!(cfg.zeta > 0.0) || !(cfg.zeta < 1.0))
        throw std::invalid_argument("zeta must lie in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned threads = resolve_threads(cfg.parallelism);

    CirParams null_params;
    null_params.beta = cfg.beta;
    null_params.gamma = 0.0;
    null_params.steps = cfg.table_steps;
    const auto null_dist = sample_limit(
        null_params, cfg.table_draws,
        RngStream(derive_seed(cfg.seed, "power/table"), 0), threads);
    const double q = null_dist.quantile(cfg.zeta);

    ExperimentReport report;
    report.experiment = "power";
    report.config = cfg;
    report.notes = "rejection rate of the unit-root test under stationary "
                   "alternatives at zeta = " + fmt(cfg.zeta);

    for (const std::uint64_t n : cfg.ns) {
        for (const double alpha : cfg.alphas) {
            if (!(alpha >= 0.0) || !(alpha <= 1.0))
                throw std::invalid_argument("alpha must lie in [0, 1]");
            const std::uint64_t sim_seed = derive_seed(
                cfg.seed, "power/n=" + std::to_string(n) +
                              "/alpha=" + fmt(alpha) + "/sim");
            std::vector<unsigned char> rej(cfg.replications);
            parallel_for(cfg.replications, threads, [&](std::uint64_t r) {
                RngStream rng(sim_seed, r);
                const auto series = simulate_inarch(
                    InarchParams{cfg.beta, alpha, cfg.kappa}, n, rng);
                const ClsFit fit = cls_alpha(series, cfg.beta);
                const double stat =
                    static_cast<double>(fit.n) * (fit.alpha_hat - 1.0);
                rej[r] = stat < q ? 1 : 0;
            });
            std::uint64_t hits = 0;
            for (const unsigned char b : rej) hits += b;
            report.rows.push_back(make_row(
                {{"beta", cfg.beta},
                 {"n", static_cast<double>(n)},
                 {"alpha", alpha},
                 {"zeta", cfg.zeta}},
                "power", hits, cfg.replications));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

ExperimentReport run_coverage(const McConfig& cfg) {
    require_common(cfg);
    if (cfg.alphas.empty())
        throw std::invalid_argument("coverage experiment needs alphas");
    if (cfg.ns.empty())
        throw std::invalid_argument("coverage experiment needs sample sizes");
    if (cfg.levels.empty())
        throw std::invalid_argument("coverage experiment needs levels");
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned threads = resolve_threads(cfg.parallelism);

    ExperimentReport report;
    report.experiment = "coverage";
    report.config = cfg;
    report.notes =
        "per-replication drift estimate gamma_hat = max(0, n(1 - alpha_hat)); "
        "limit samples cached on a gamma grid of pitch " +
        fmt(cfg.grid_pitch) + " with " + std::to_string(cfg.grid_draws) +
        " draws at " + std::to_string(cfg.grid_steps) + " steps";

    for (const double alpha : cfg.alphas) {
        if (!(alpha >= 0.0) || !(alpha <= 1.0))
            throw std::invalid_argument("alpha must lie in [0, 1]");
        for (const std::uint64_t n : cfg.ns) {
            const std::string tag = "coverage/alpha=" + fmt(alpha) +
                                    "/n=" + std::to_string(n);
            const auto provider = grid_limit_provider(
                cfg.beta, cfg.grid_pitch, cfg.grid_steps, cfg.grid_draws,
                derive_seed(cfg.seed, tag + "/tables"), 1);
            const std::uint64_t sim_seed = derive_seed(cfg.seed, tag + "/sim");
            const std::size_t nl = cfg.levels.size();
            std::vector<unsigned char> cover(cfg.replications * nl);
            parallel_for(cfg.replications, threads, [&](std::uint64_t r) {
                RngStream rng(sim_seed, r);
                const auto series = simulate_inarch(
                    InarchParams{cfg.beta, alpha, cfg.kappa}, n, rng);
                for (std::size_t li = 0; li < nl; ++li) {
                    const CiResult ci = ci_nearly_unstable(
                        series, cfg.beta, provider, cfg.levels[li]);
                    cover[r * nl + li] =
                        (ci.lower <= alpha && alpha <= ci.upper) ? 1 : 0;
                }
            });
            for (std::size_t li = 0; li < nl; ++li) {
                std::uint64_t hits = 0;
                for (std::uint64_t r = 0; r < cfg.replications; ++r)
                    hits += cover[r * nl + li];
                report.rows.push_back(make_row(
                    {{"beta", cfg.beta},
                     {"alpha", alpha},
                     {"n", static_cast<double>(n)},
                     {"level", cfg.levels[li]}},
                    "coverage", hits, cfg.replications));
            }
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

std::vector<double> standardized_estimates(const McConfig& cfg,
                                           Scaling scaling) {
    require_common(cfg);
    if (cfg.alphas.empty() || cfg.ns.empty())
        throw std::invalid_argument(
            "standardized estimates need one alpha and one sample size");
    const double alpha = cfg.alphas.front();
    const std::uint64_t n = cfg.ns.front();
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1]");
    const unsigned threads = resolve_threads(cfg.parallelism);
    const std::uint64_t sim_seed = derive_seed(
        cfg.seed, "standardized/alpha=" + fmt(alpha) +
                      "/n=" + std::to_string(n) + "/sim");
    const double scale = scaling == Scaling::n
                             ? static_cast<double>(n)
                             : std::sqrt(static_cast<double>(n));
    std::vector<double> out(cfg.replications);
    parallel_for(cfg.replications, threads, [&](std::uint64_t r) {
        RngStream rng(sim_seed, r);
        const auto series =
            simulate_inarch(InarchParams{cfg.beta, alpha, cfg.kappa}, n, rng);
        const ClsFit fit = cls_alpha(series, cfg.beta);
        out[r] = scale * (fit.alpha_hat - alpha);
    });
    return out;
}

DensityCurve kde(const std::vector<double>& sample, double bandwidth,
                 std::size_t grid_size) {
    if (sample.empty())
        throw std::invalid_argument("density estimate needs observations");
    if (grid_size < 2)
        throw std::invalid_argument("grid must have at least 2 points");
    for (const double v : sample)
        if (!std::isfinite(v))
            throw std::invalid_argument("sample contains non-finite values");

    double h = bandwidth;
    if (!(h > 0.0)) {
        if (sample.size() < 2)
            throw std::invalid_argument(
                "automatic bandwidth needs at least two observations");
        double mean = 0.0;
        for (const double v : sample) mean += v;
        mean /= static_cast<double>(sample.size());
        double ss = 0.0;
        for (const double v : sample) ss += (v - mean) * (v - mean);
        const double sd =
            std::sqrt(ss / static_cast<double>(sample.size() - 1));
        if (!(sd > 0.0))
            throw std::invalid_argument(
                "automatic bandwidth needs dispersion in the sample");
        h = 1.06 * sd *
            std::pow(static_cast<double>(sample.size()), -0.2);
    }

    const auto [mn_it, mx_it] = std::minmax_element(sample.begin(), sample.end());
    const double lo = *mn_it - 3.0 * h;
    const double hi = *mx_it + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);

    DensityCurve curve;
    curve.grid.resize(grid_size);
    curve.density.resize(grid_size);
    const double norm =
        1.0 / (static_cast<double>(sample.size()) * h *
               std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t g = 0; g < grid_size; ++g) {
        const double x = lo + step * static_cast<double>(g);
        double acc = 0.0;
        for (const double v : sample) {
            const double z = (x - v) / h;
            acc += std::exp(-0.5 * z * z);
        }
        curve.grid[g] = x;
        curve.density[g] = acc * norm;
    }
    return curve;
}

std::vector<std::pair<double, double>> qq_pairs(
    const std::vector<double>& sample,
    const EmpiricalDistribution& reference) {
    if (sample.empty())
        throw std::invalid_argument("qq pairs need observations");
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const double len = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / len;
        out.emplace_back(reference.quantile(p), sorted[i]);
    }
    return out;
}

}  // namespace nuinarch
