#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nuinarch/cir.hpp"
#include "nuinarch/errors.hpp"
#include "nuinarch/estimate.hpp"
#include "nuinarch/harness.hpp"
#include "nuinarch/infer.hpp"
#include "nuinarch/io.hpp"
#include "nuinarch/model.hpp"
#include "nuinarch/rng.hpp"
#include "nuinarch/simulate.hpp"

namespace {

using nuinarch::data_error;
using nuinarch::numerical_error;
using json = nlohmann::json;

// Values from --config fill any option the command line leaves untouched:
// flags beat the file, the file beats built-in defaults. The same key can be
// bound by several subcommands with different types (scalar --alpha on
// simulate, a list on the Monte Carlo commands), so a value is applied to
// every binding that accepts it and rejected only when none does.
class ConfigLayer {
public:
    void bind(const std::string& key, std::function<void(const json&)> set) {
        setters_[key].push_back(std::move(set));
    }

    void apply(const json& cfg) {
        if (!cfg.is_object())
            throw data_error("config file must hold a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const auto it = setters_.find(key);
            if (it == setters_.end())
                throw CLI::ValidationError("config",
                                           "unknown config key \"" + key +
                                               "\"");
            std::size_t accepted = 0;
            for (const auto& set : it->second) {
                try {
                    set(value);
                    ++accepted;
                } catch (const json::exception&) {
                }
            }
            if (accepted == 0)
                throw data_error("config key \"" + key +
                                 "\" has the wrong type");
        }
    }

private:
    std::map<std::string, std::vector<std::function<void(const json&)>>>
        setters_;
};

ConfigLayer config_layer;

// Options filled from the config file count as present for requiredness, so
// CLI11's own required() cannot be used; each subcommand callback starts with
// check_required over the options registered through req().
std::set<const CLI::Option*> config_satisfied;
std::map<const CLI::App*, std::vector<const CLI::Option*>> required_by_sub;

CLI::Option* req(CLI::App* sub, CLI::Option* o) {
    required_by_sub[sub].push_back(o);
    return o;
}

void check_required(const CLI::App* sub) {
    const auto it = required_by_sub.find(sub);
    if (it == required_by_sub.end()) return;
    for (const CLI::Option* o : it->second)
        if (o->count() == 0 && config_satisfied.count(o) == 0)
            throw CLI::RequiredError(o->get_name());
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& var,
                 const std::string& desc) {
    CLI::Option* o = app->add_option(name, var, desc);
    std::string key = name.substr(name.find_first_not_of('-'));
    config_layer.bind(key, [&var, o](const json& v) {
        if (o->count() == 0) {
            var = v.get<T>();
            config_satisfied.insert(o);
        }
    });
    return o;
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& var,
                  const std::string& desc) {
    CLI::Option* o = app->add_flag(name, var, desc);
    std::string key = name.substr(name.find_first_not_of('-'));
    config_layer.bind(key, [&var, o](const json& v) {
        if (o->count() == 0) {
            var = v.get<bool>();
            config_satisfied.insert(o);
        }
    });
    return o;
}

void emit(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty())
        std::cout << content;
    else
        nuinarch::write_text_file(path, content);
}

std::string series_csv_text(const nuinarch::CountSeries& series) {
    std::string out = "t,count\n";
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out += std::to_string(i) + ',' + std::to_string(series.values[i]) +
               '\n';
    return out;
}

// ---- simulate ----

struct SimulateOpts {
    double beta = 1.0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::uint64_t n = 0;
    std::uint64_t kappa = 0;
    std::uint64_t seed = 0;
    std::string out = "-";
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
};

void setup_simulate(CLI::App& app, SimulateOpts& o) {
    CLI::App* sub =
        app.add_subcommand("simulate", "Draw one count series to CSV");
    opt(sub, "--beta", o.beta, "intercept of the conditional mean");
    o.alpha_opt = opt(sub, "--alpha", o.alpha,
                      "autoregressive coefficient in [0, 1]");
    o.gamma_opt = opt(sub, "--gamma", o.gamma,
                      "local-to-unity drift; sets alpha = 1 - gamma/n");
    req(sub, opt(sub, "--n", o.n, "number of transitions to draw"));
    opt(sub, "--kappa", o.kappa, "integer starting value");
    opt(sub, "--seed", o.seed, "stream seed");
    opt(sub, "--out", o.out, "output CSV path, - for stdout");
    o.alpha_opt->excludes(o.gamma_opt);
    o.gamma_opt->excludes(o.alpha_opt);
    sub->callback([&o, sub] {
        check_required(sub);
        nuinarch::RngStream rng(o.seed, 0);
        nuinarch::CountSeries series;
        if (o.gamma_opt->count() > 0) {
            series = nuinarch::simulate_nu_inarch(
                nuinarch::NearlyUnstableSpec{o.beta, o.gamma, o.n}, o.kappa,
                rng);
        } else if (o.alpha_opt->count() > 0) {
            series = nuinarch::simulate_inarch(
                nuinarch::InarchParams{o.beta, o.alpha, o.kappa}, o.n, rng);
        } else {
            throw CLI::ValidationError("simulate",
                                       "one of --alpha or --gamma is needed");
        }
        emit(o.out, series_csv_text(series));
    });
}

// ---- analyze ----

struct AnalyzeOpts {
    std::string in;
    std::string column;
    bool no_date = false;
    bool beta_given = false;
    double beta = 0.0;
    double zeta = 0.05;
    std::uint32_t steps = 5000;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string table;
    std::string out = "-";
    std::string predictions;
    CLI::Option* beta_opt = nullptr;
};

std::string predictions_path(const AnalyzeOpts& o) {
    if (!o.predictions.empty()) return o.predictions;
    if (o.out == "-" || o.out.empty()) return "";
    std::string base = o.out;
    const std::size_t dot = base.find_last_of('.');
    const std::size_t slash = base.find_last_of("/\\");
    if (dot != std::string::npos &&
        (slash == std::string::npos || dot > slash))
        base = base.substr(0, dot);
    return base + "_predictions.csv";
}

void setup_analyze(CLI::App& app, AnalyzeOpts& o) {
    CLI::App* sub = app.add_subcommand(
        "analyze",
        "Fit a count series and test the unit root of its autoregression");
    sub->alias("urtest");
    req(sub, opt(sub, "--in", o.in, "input CSV of counts"));
    opt(sub, "--column", o.column, "name of the count column");
    flag(sub, "--no-date", o.no_date, "ignore any date column");
    o.beta_opt = opt(sub, "--beta", o.beta,
                     "hold the intercept fixed instead of estimating it");
    config_layer.bind("beta", [&o](const json& v) {
        (void)v.get<double>();
        o.beta_given = true;
    });
    opt(sub, "--zeta", o.zeta, "test level");
    opt(sub, "--steps", o.steps, "Euler steps per limit draw");
    opt(sub, "--draws", o.draws, "Monte Carlo draws for the null sample");
    opt(sub, "--seed", o.seed, "stream seed for the null sample");
    opt(sub, "--threads", o.threads, "worker threads, 0 for auto");
    opt(sub, "--table", o.table,
        "use a persisted critical-value table instead of sampling");
    opt(sub, "--out", o.out, "JSON report path, - for stdout");
    opt(sub, "--predictions", o.predictions,
        "CSV path for one-step-ahead conditional means");
    sub->callback([&o, sub] {
        check_required(sub);
        const nuinarch::CountDataset data =
            nuinarch::ingest_csv(o.in, o.column, !o.no_date);
        const auto& series = data.series;

        double beta = o.beta;
        std::string beta_mode = "fixed";
        if (o.beta_opt->count() == 0 && !o.beta_given) {
            const nuinarch::CmlFit fit =
                nuinarch::cml_fit(series, nuinarch::CmlMode::joint);
            beta = fit.beta_hat;
            beta_mode = "estimated";
        }

        nuinarch::UrtResult urt;
        json table_info;
        if (!o.table.empty()) {
            const nuinarch::CriticalValueTable table =
                nuinarch::read_table_json(o.table);
            urt = nuinarch::unit_root_test(series, beta, table, o.zeta);
            table_info = {{"beta", table.prov.beta},
                          {"gamma", table.prov.gamma},
                          {"steps", table.prov.steps},
                          {"draws", table.prov.draws},
                          {"seed", table.prov.seed},
                          {"source", "loaded"}};
        } else {
            nuinarch::CirParams params;
            params.beta = beta;
            params.gamma = 0.0;
            params.steps = o.steps;
            const auto dist = nuinarch::sample_limit(
                params, o.draws, nuinarch::RngStream(o.seed, 0), o.threads);
            urt = nuinarch::unit_root_test(series, beta, dist, o.zeta);
            const auto& prov = dist.provenance();
            table_info = {{"beta", prov.beta},
                          {"gamma", prov.gamma},
                          {"steps", prov.steps},
                          {"draws", prov.draws},
                          {"seed", prov.seed},
                          {"source", "sampled"}};
        }

        const nuinarch::ClsFit cls = nuinarch::cls_alpha(series, beta);
        json report;
        report["beta_hat"] = beta;
        report["beta_mode"] = beta_mode;
        report["alpha_hat"] = cls.alpha_hat;
        report["n"] = cls.n;
        report["statistic"] = urt.statistic;
        report["q_zeta"] = urt.critical_value;
        report["p_value"] = urt.p_value;
        report["reject"] = urt.reject;
        report["zeta"] = urt.zeta;
        report["count_column"] = data.count_column;
        report["table"] = std::move(table_info);
        emit(o.out, report.dump(2) + "\n");

        const std::string pred_path = predictions_path(o);
        if (!pred_path.empty()) {
            const auto means =
                nuinarch::predicted_means(series, beta, cls.alpha_hat);
            std::string text = "t,observed,predicted\n";
            for (std::size_t i = 0; i < means.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%zu,%llu,", i + 1,
                              static_cast<unsigned long long>(
                                  series.values[i + 1]));
                text += buf;
                std::snprintf(buf, sizeof(buf), "%.17g\n", means[i]);
                text += buf;
            }
            nuinarch::write_text_file(pred_path, text);
        }
    });
}

// ---- tables ----

struct TablesOpts {
    double beta = 1.0;
    double gamma = 0.0;
    std::uint32_t steps = 5000;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
    std::string raw;
};

void setup_tables(CLI::App& app, TablesOpts& o) {
    CLI::App* sub = app.add_subcommand(
        "tables", "Sample the limit law and persist its quantile table");
    opt(sub, "--beta", o.beta, "diffusion drift intercept");
    opt(sub, "--gamma", o.gamma, "mean-reversion rate");
    opt(sub, "--steps", o.steps, "Euler steps per draw");
    opt(sub, "--draws", o.draws, "Monte Carlo draws");
    opt(sub, "--seed", o.seed, "stream seed");
    opt(sub, "--threads", o.threads, "worker threads, 0 for auto");
    req(sub, opt(sub, "--out", o.out, "output JSON path"));
    opt(sub, "--raw", o.raw, "optional CSV path for the sorted raw draws");
    sub->callback([&o, sub] {
        check_required(sub);
        nuinarch::CirParams params;
        params.beta = o.beta;
        params.gamma = o.gamma;
        params.steps = o.steps;
        const auto dist = nuinarch::sample_limit(
            params, o.draws, nuinarch::RngStream(o.seed, 0), o.threads);
        const auto table = nuinarch::CriticalValueTable::from_distribution(
            dist, nuinarch::CriticalValueTable::default_levels());
        nuinarch::write_table_json(o.out, table);
        if (!o.raw.empty())
            nuinarch::write_values_csv(o.raw, "value", dist.values());
    });
}

// ---- mc ----

struct McOpts {
    nuinarch::McConfig cfg;
    std::string out = "-";
    std::string scaling = "n";
};

void write_report(const nuinarch::ExperimentReport& report,
                  const std::string& out) {
    if (out == "-" || out.empty()) {
        std::cout << report.to_json();
        return;
    }
    if (out.size() > 5 && out.substr(out.size() - 5) == ".json") {
        nuinarch::write_text_file(out, report.to_json());
        return;
    }
    if (out.size() > 4 && out.substr(out.size() - 4) == ".csv") {
        nuinarch::write_text_file(out, report.to_csv());
        return;
    }
    nuinarch::write_text_file(out + ".json", report.to_json());
    nuinarch::write_text_file(out + ".csv", report.to_csv());
}

void add_mc_common(CLI::App* sub, McOpts& o) {
    opt(sub, "--beta", o.cfg.beta, "intercept of the conditional mean");
    opt(sub, "--kappa", o.cfg.kappa, "integer starting value");
    opt(sub, "--reps", o.cfg.replications, "Monte Carlo replications");
    opt(sub, "--seed", o.cfg.seed, "master seed");
    opt(sub, "--threads", o.cfg.parallelism, "worker threads, 0 for auto");
    opt(sub, "--out", o.out,
        "report path; .json or .csv picks one format, otherwise both are "
        "written; - for stdout");
}

void setup_mc(CLI::App& app, McOpts& cov, McOpts& size, McOpts& power,
              McOpts& std_opts) {
    CLI::App* mc = app.add_subcommand(
        "mc", "Monte Carlo studies of the estimators and tests");
    mc->require_subcommand(1);

    CLI::App* c = mc->add_subcommand(
        "coverage", "Coverage of the local-to-unity confidence intervals");
    cov.cfg.alphas = {0.999, 0.99, 0.98, 0.9, 0.8, 0.7};
    cov.cfg.ns = {500};
    cov.cfg.levels = {0.90, 0.95, 0.99};
    add_mc_common(c, cov);
    opt(c, "--alpha", cov.cfg.alphas, "true coefficients");
    opt(c, "--n", cov.cfg.ns, "series lengths (transitions)");
    opt(c, "--level", cov.cfg.levels, "confidence levels");
    opt(c, "--grid-pitch", cov.cfg.grid_pitch, "gamma grid pitch");
    opt(c, "--grid-draws", cov.cfg.grid_draws, "draws per grid sample");
    opt(c, "--grid-steps", cov.cfg.grid_steps, "Euler steps per grid sample");
    c->callback([&cov] { write_report(nuinarch::run_coverage(cov.cfg), cov.out); });

    CLI::App* s = mc->add_subcommand(
        "size", "Null rejection rate of the unit-root test");
    size.cfg.ns = {500};
    size.cfg.zetas = {0.10, 0.05, 0.01};
    add_mc_common(s, size);
    opt(s, "--n", size.cfg.ns, "series lengths (transitions)");
    opt(s, "--zeta", size.cfg.zetas, "test levels");
    opt(s, "--steps", size.cfg.table_steps, "Euler steps per null draw");
    opt(s, "--draws", size.cfg.table_draws, "draws in the null sample");
    s->callback([&size] { write_report(nuinarch::run_size(size.cfg), size.out); });

    CLI::App* p = mc->add_subcommand(
        "power", "Rejection rate under stationary alternatives");
    power.cfg.alphas = {0.999, 0.99, 0.98, 0.95, 0.9, 0.8, 0.7};
    power.cfg.ns = {500};
    add_mc_common(p, power);
    opt(p, "--alpha", power.cfg.alphas, "alternative coefficients");
    opt(p, "--n", power.cfg.ns, "series lengths (transitions)");
    opt(p, "--zeta", power.cfg.zeta, "test level");
    opt(p, "--steps", power.cfg.table_steps, "Euler steps per null draw");
    opt(p, "--draws", power.cfg.table_draws, "draws in the null sample");
    p->callback(
        [&power] { write_report(nuinarch::run_power(power.cfg), power.out); });

    CLI::App* st = mc->add_subcommand(
        "standardized", "Sample of scaled estimation errors");
    add_mc_common(st, std_opts);
    req(st, opt(st, "--alpha", std_opts.cfg.alphas, "true coefficient"));
    req(st, opt(st, "--n", std_opts.cfg.ns, "series length (transitions)"));
    opt(st, "--scaling", std_opts.scaling, "n or sqrt_n");
    st->callback([&std_opts, st] {
        check_required(st);
        nuinarch::Scaling scaling;
        if (std_opts.scaling == "n")
            scaling = nuinarch::Scaling::n;
        else if (std_opts.scaling == "sqrt_n")
            scaling = nuinarch::Scaling::sqrt_n;
        else
            throw CLI::ValidationError("--scaling",
                                       "must be n or sqrt_n");
        const auto sample =
            nuinarch::standardized_estimates(std_opts.cfg, scaling);
        if (std_opts.out == "-" || std_opts.out.empty()) {
            std::string text = "value\n";
            for (const double v : sample) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g\n", v);
                text += buf;
            }
            std::cout << text;
        } else {
            nuinarch::write_values_csv(std_opts.out, "value", sample);
        }
    });
}

// ---- kde / qq ----

struct KdeOpts {
    std::string in;
    double bandwidth = 0.0;
    std::size_t grid = 512;
    std::string out = "-";
};

void setup_kde(CLI::App& app, KdeOpts& o) {
    CLI::App* sub = app.add_subcommand(
        "kde", "Gaussian kernel density estimate of a sample");
    req(sub, opt(sub, "--in", o.in, "CSV of values"));
    opt(sub, "--bandwidth", o.bandwidth,
        "kernel bandwidth; 0 for the normal-reference rule");
    opt(sub, "--grid", o.grid, "number of grid points");
    opt(sub, "--out", o.out, "output CSV path, - for stdout");
    sub->callback([&o, sub] {
        check_required(sub);
        const auto sample = nuinarch::read_values_csv(o.in);
        const auto curve = nuinarch::kde(sample, o.bandwidth, o.grid);
        std::string text = "x,density\n";
        for (std::size_t i = 0; i < curve.grid.size(); ++i) {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.grid[i],
                          curve.density[i]);
            text += buf;
        }
        emit(o.out, text);
    });
}

struct QqOpts {
    std::string in;
    std::string ref;
    std::string out = "-";
};

void setup_qq(CLI::App& app, QqOpts& o) {
    CLI::App* sub = app.add_subcommand(
        "qq", "Quantile-quantile pairs of a sample against a reference");
    req(sub, opt(sub, "--in", o.in, "CSV of sample values"));
    req(sub, opt(sub, "--ref", o.ref, "CSV of reference draws"));
    opt(sub, "--out", o.out, "output CSV path, - for stdout");
    sub->callback([&o, sub] {
        check_required(sub);
        const auto sample = nuinarch::read_values_csv(o.in);
        const auto ref_values = nuinarch::read_values_csv(o.ref);
        const nuinarch::EmpiricalDistribution ref(ref_values, {});
        const auto pairs = nuinarch::qq_pairs(sample, ref);
        std::string text = "reference,sample\n";
        for (const auto& [a, b] : pairs) {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", a, b);
            text += buf;
        }
        emit(o.out, text);
    });
}

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and inference for nearly unstable count "
                 "autoregressions"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON file of option defaults; command-line flags win")
        ->expected(1);

    SimulateOpts sim;
    AnalyzeOpts ana;
    TablesOpts tab;
    McOpts cov, size, power, std_opts;
    KdeOpts kde_opts;
    QqOpts qq_opts;

    setup_simulate(app, sim);
    setup_analyze(app, ana);
    setup_tables(app, tab);
    setup_mc(app, cov, size, power, std_opts);
    setup_kde(app, kde_opts);
    setup_qq(app, qq_opts);

    try {
        const std::string pre = find_config_path(argc, argv);
        if (!pre.empty()) {
            json cfg;
            try {
                cfg = json::parse(nuinarch::read_text_file(pre));
            } catch (const json::exception& e) {
                throw data_error("config " + pre + " is not valid JSON: " +
                                 e.what());
            }
            config_layer.apply(cfg);
        }
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
