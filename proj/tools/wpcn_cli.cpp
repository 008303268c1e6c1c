// Command-line front end: single evaluations, figure tables and parameter sweeps as CSV.
//
// Exit codes: 0 success, 1 invalid config or arguments, 2 numerical failure, 3 I/O failure.

#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/grouping.hpp"
#include "wpcn/montecarlo.hpp"
#include "wpcn/orderstats.hpp"
#include "wpcn/rates.hpp"
#include "wpcn/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wpcn;

struct CommonOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::uint64_t seed = 1;
    std::int64_t trials = 100000;
    double target_stderr = 0.0;
    std::string method = "exact";
    std::string out_path;
};

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Flat key = value config file");
    for (const auto& key : config_keys()) {
        cmd->add_option_function<std::string>(
            flag_name(key), [&opts, key](const std::string& v) { opts.overrides[key] = v; },
            "Override config field " + key);
    }
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed")->capture_default_str();
    cmd->add_option("--trials", opts.trials, "Monte Carlo trials")->capture_default_str();
    cmd->add_option("--target-stderr", opts.target_stderr, "Relative standard error for early stopping (0 = off)");
    cmd->add_option("--method", opts.method, "exact | asymptotic | mc")->capture_default_str();
    cmd->add_option("--out", opts.out_path, "Output CSV path (default: stdout)");
}

struct Resolved {
    NetworkConfig cfg;
    Method method = Method::Exact;
    McOptions mc;
};

Resolved resolve(const CommonOptions& opts) {
    Resolved r;
    if (!opts.config_path.empty()) r.cfg = load_config(opts.config_path);
    // Apply in declaration order so results do not depend on flag order.
    for (const auto& key : config_keys()) {
        if (const auto it = opts.overrides.find(key); it != opts.overrides.end()) set_field(r.cfg, key, it->second);
    }
    validate(r.cfg);
    r.method = parse_method(opts.method);
    if (opts.trials < 1) throw InvalidConfig("--trials must be at least 1");
    r.mc.trials = opts.trials;
    r.mc.seed = opts.seed;
    if (opts.target_stderr > 0.0) r.mc.target_stderr = opts.target_stderr;
    return r;
}

// Writes the buffered CSV to --out or stdout.
void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text << std::flush;
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) throw IoError("cannot open " + opts.out_path + " for writing");
    file << text;
    file.close();
    if (!file) throw IoError("failed writing " + opts.out_path);
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<Scheme> out;
    for (const auto& name : names) {
        if (name == "all") return {Scheme::FairnessAwareNoma, Scheme::RandomGroupingNoma, Scheme::Tdma};
        out.push_back(parse_scheme(name));
    }
    return out;
}

int run_validate(const Resolved& r) {
    const auto& cfg = r.cfg;
    const auto dc = derive_constants(cfg);
    constexpr double kSigmas = 4.0;
    bool all_ok = true;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_ok = all_ok && ok;
    };

    {
        const auto est = estimate_log_order_distances(cfg, r.mc);
        double worst = 0.0;
        for (int n = 1; n <= cfg.n_users; ++n) {
            const auto& e = est[static_cast<std::size_t>(n - 1)];
            const double closed = expected_log_distance({n, cfg.n_users}, cfg.wet_radius);
            worst = std::max(worst, std::abs(e.mean - closed) / e.std_error);
        }
        report("E[ln R_(n)] closed form vs simulation", worst <= kSigmas, "max |z| = " + format_number(worst));
    }

    const auto best = find_optimal_l(cfg, dc, Method::Exact);
    for (int l : {0, best.l_star}) {
        const auto sim = simulate_rates(l, cfg, dc, r.mc);
        double worst = 0.0;
        for (int n = 1; n <= cfg.n_users; ++n) {
            const auto& e = sim.per_rank[static_cast<std::size_t>(n - 1)];
            worst = std::max(worst, std::abs(rate_exact(n, l, cfg, dc) - e.mean) / e.std_error);
        }
        report("exact rates vs simulation at l = " + std::to_string(l), worst <= kSigmas,
               "max |z| = " + format_number(worst));
        const double exact_sum = sum_rate(rate_profile(l, cfg, dc, Method::Exact));
        const double z = std::abs(exact_sum - sim.sum_rate.mean) / sim.sum_rate.std_error;
        report("sum-rate vs simulation at l = " + std::to_string(l), z <= kSigmas, "|z| = " + format_number(z));
    }

    {
        int scan_best = 0;
        double scan_value = -1.0;
        for (int l = 0; l <= cfg.n_users; ++l) {
            const double v = group_minima(l, cfg, dc).objective();
            if (v > scan_value) {
                scan_value = v;
                scan_best = l;
            }
        }
        report("bisection vs exhaustive scan", scan_best == best.l_star,
               "l* = " + std::to_string(best.l_star) + ", scan = " + std::to_string(scan_best));
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fairness-aware NOMA scheduling for wireless powered networks"};
    app.require_subcommand(1);

    CommonOptions common;
    std::vector<std::string> scheme_names{"all"};
    std::vector<int> l_values;
    std::string sweep_param = "tau0";
    std::vector<double> sweep_values;

    auto* eval = app.add_subcommand("eval", "Fairness report for one or more schemes");
    add_common(eval, common);
    eval->add_option("--scheme", scheme_names, "fa | rg | tdma | all")->delimiter(',');

    auto* min_vs_l = app.add_subcommand("fig-min-vs-l", "Worst interfered / non-interfered rate for l = 0..N");
    add_common(min_vs_l, common);

    auto* rate_vs_rank = app.add_subcommand("fig-rate-vs-rank", "Per-rank rates for selected l (0 and l* always)");
    add_common(rate_vs_rank, common);
    rate_vs_rank->add_option("--l", l_values, "Group sizes, comma separated")->delimiter(',');

    auto* sweep = app.add_subcommand("sweep", "Scheme comparison across l, tau0 or n_users");
    add_common(sweep, common);
    sweep->add_option("--param", sweep_param, "l | tau0 | n_users")->capture_default_str();
    sweep->add_option("--values", sweep_values, "Sweep points, comma separated")->delimiter(',');
    sweep->add_option("--schemes", scheme_names, "fa,rg,tdma or all")->delimiter(',');

    auto* check = app.add_subcommand("validate", "Analytical vs Monte Carlo cross-checks");
    add_common(check, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto r = resolve(common);
        std::ostringstream out;
        RunMetadata meta{app.get_subcommands().front()->get_name(), r.method, r.mc};

        if (eval->parsed()) {
            const auto dc = derive_constants(r.cfg);
            std::vector<FairnessReport> reports;
            for (Scheme s : parse_schemes(scheme_names)) reports.push_back(evaluate_scheme(s, r.cfg, dc, r.method, r.mc));
            write_metadata(out, meta, r.cfg);
            write_reports(out, reports);
        } else if (min_vs_l->parsed()) {
            write_metadata(out, meta, r.cfg);
            run_fig_min_vs_l(r.cfg, r.method, r.mc, out);
        } else if (rate_vs_rank->parsed()) {
            for (int l : l_values) {
                if (l < 0 || l > r.cfg.n_users) throw InvalidConfig("--l value outside [0, n_users]");
            }
            write_metadata(out, meta, r.cfg);
            run_fig_rate_vs_rank(r.cfg, l_values, r.method, r.mc, out);
        } else if (sweep->parsed()) {
            SweepSpec spec;
            spec.parameter = parse_sweep_parameter(sweep_param);
            spec.schemes = parse_schemes(scheme_names);
            spec.method = r.method;
            spec.mc = r.mc;
            spec.values = sweep_values;
            if (spec.values.empty()) {
                switch (spec.parameter) {
                    case SweepParameter::Tau0: spec.values = default_tau0_grid(); break;
                    case SweepParameter::NumUsers: spec.values = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; break;
                    case SweepParameter::GroupSizeL:
                        for (int l = 0; l <= r.cfg.n_users; ++l) spec.values.push_back(l);
                        break;
                }
            }
            validate(spec, r.cfg);
            meta.command = "sweep " + std::string(to_string(spec.parameter));
            write_metadata(out, meta, r.cfg);
            const auto rows = run_sweep(spec, r.cfg, out);
            emit(common, out.str());
            const bool failed = std::any_of(rows.begin(), rows.end(), [](const SweepRow& row) { return !row.report; });
            return failed ? 2 : 0;
        } else if (check->parsed()) {
            return run_validate(r);
        }
        emit(common, out.str());
        return 0;
    } catch (const InvalidConfig& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O failure: " << e.what() << '\n';
        return 3;
    }
}
