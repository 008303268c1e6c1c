#include "wpcn/sweep.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace wpcn {

namespace {

void check_stream(const std::ostream& out) {
    if (!out) throw IoError("failed writing CSV output");
}

std::string optional_field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

bool is_integer(double v) { return std::floor(v) == v; }

// CSV-safe status text: no commas or newlines.
std::string sanitize(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

}  // namespace

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::GroupSizeL: return "l";
        case SweepParameter::Tau0: return "tau0";
        case SweepParameter::NumUsers: return "n_users";
    }
    return "tau0";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
    if (text == "l") return SweepParameter::GroupSizeL;
    if (text == "tau0") return SweepParameter::Tau0;
    if (text == "n_users" || text == "n-users" || text == "N") return SweepParameter::NumUsers;
    throw InvalidConfig("unknown sweep parameter '" + std::string(text) + "' (expected l, tau0 or n_users)");
}

void validate(const SweepSpec& spec, const NetworkConfig& cfg) {
    if (spec.values.empty()) throw InvalidConfig("sweep needs at least one value");
    if (spec.schemes.empty()) throw InvalidConfig("sweep needs at least one scheme");
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
        if (!(spec.values[i] > spec.values[i - 1])) throw InvalidConfig("sweep values must be strictly increasing");
    }
    for (double v : spec.values) {
        switch (spec.parameter) {
            case SweepParameter::GroupSizeL:
                if (!is_integer(v) || v < 0 || v > cfg.n_users) {
                    throw InvalidConfig("sweep value " + format_number(v) + " is not a group size in [0, N]");
                }
                break;
            case SweepParameter::Tau0:
                if (!(v >= 0.0 && v < 1.0)) throw InvalidConfig("sweep value " + format_number(v) + " outside [0, 1)");
                break;
            case SweepParameter::NumUsers:
                if (!is_integer(v) || v < 1 || v > 100000) {
                    throw InvalidConfig("sweep value " + format_number(v) + " is not a user count");
                }
                break;
        }
    }
    if (spec.mc.trials < 1) throw InvalidConfig("trials must be at least 1");
}

std::vector<double> default_tau0_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 15; ++k) grid.push_back(k * 0.02);
    return grid;
}

void write_metadata(std::ostream& out, const RunMetadata& meta, const NetworkConfig& cfg) {
    out << "# wpcn " << kVersion << '\n';
    out << "# command: " << meta.command << '\n';
    out << "# method: " << to_string(meta.method) << '\n';
    out << "# seed: " << meta.mc.seed << '\n';
    out << "# trials: " << meta.mc.trials << '\n';
    if (meta.mc.target_stderr) out << "# target_stderr: " << format_number(*meta.mc.target_stderr) << '\n';
    out << "# generator: " << kGeneratorName << '\n';
    for (const auto& [key, value] : to_key_values(cfg)) out << "# config." << key << ": " << value << '\n';
    check_stream(out);
}

MinVsLTable run_fig_min_vs_l(const NetworkConfig& cfg, Method method, const McOptions& mc, std::ostream& out) {
    const auto dc = derive_constants(cfg);
    MinVsLTable table;
    std::optional<double> best;
    for (int l = 0; l <= cfg.n_users; ++l) {
        MinVsLRow row{l, group_minima(l, cfg, dc, method, mc)};
        const double v = row.minima.objective();
        if (!best || v > *best) {
            best = v;
            table.l_star = l;
        }
        table.rows.push_back(row);
    }
    out << "l,min_interfered,min_noninterfered,overall_min,optimal\n";
    for (const auto& row : table.rows) {
        out << row.l << ',' << optional_field(row.minima.interfered) << ','
            << optional_field(row.minima.noninterfered) << ',' << format_number(row.minima.objective()) << ','
            << (row.l == table.l_star ? 1 : 0) << '\n';
    }
    check_stream(out);
    return table;
}

std::vector<RateProfile> run_fig_rate_vs_rank(const NetworkConfig& cfg, std::vector<int> l_values, Method method,
                                              const McOptions& mc, std::ostream& out) {
    const auto dc = derive_constants(cfg);
    l_values.push_back(0);
    l_values.push_back(find_optimal_l(cfg, dc, method, mc).l_star);
    std::sort(l_values.begin(), l_values.end());
    l_values.erase(std::unique(l_values.begin(), l_values.end()), l_values.end());

    std::vector<RateProfile> profiles;
    for (int l : l_values) profiles.push_back(rate_profile(l, cfg, dc, method, mc));

    out << 'n';
    for (int l : l_values) out << ",rate_l" << l;
    out << '\n';
    for (int n = 1; n <= cfg.n_users; ++n) {
        out << n;
        for (const auto& p : profiles) out << ',' << format_number(p.rates[static_cast<std::size_t>(n - 1)]);
        out << '\n';
    }
    check_stream(out);
    return profiles;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const NetworkConfig& cfg, std::ostream& out) {
    validate(spec, cfg);
    std::vector<SweepRow> rows;
    for (double value : spec.values) {
        NetworkConfig point = cfg;
        if (spec.parameter == SweepParameter::Tau0) point.tau0 = value;
        if (spec.parameter == SweepParameter::NumUsers) point.n_users = static_cast<int>(value);
        for (Scheme scheme : spec.schemes) {
            SweepRow row;
            row.value = value;
            row.scheme = scheme;
            try {
                const auto dc = derive_constants(point);
                row.report = spec.parameter == SweepParameter::GroupSizeL
                                 ? evaluate_scheme_at(scheme, static_cast<int>(value), point, dc, spec.method, spec.mc)
                                 : evaluate_scheme(scheme, point, dc, spec.method, spec.mc);
            } catch (const std::exception& e) {
                row.status = "error: " + sanitize(e.what());
            }
            rows.push_back(std::move(row));
        }
    }

    out << to_string(spec.parameter) << ",scheme,min_rate,min_rate_stderr,jain_index,sum_rate,l_star,status\n";
    for (const auto& row : rows) {
        out << format_number(row.value) << ',' << to_string(row.scheme) << ',';
        if (row.report) {
            const auto& r = *row.report;
            out << format_number(r.min_rate) << ',' << format_number(r.min_rate_stderr) << ','
                << optional_field(r.jain_index) << ',' << format_number(r.sum_rate) << ',' << r.l_star;
        } else {
            out << ",,,,";
        }
        out << ',' << row.status << '\n';
    }
    check_stream(out);
    return rows;
}

void write_reports(std::ostream& out, const std::vector<FairnessReport>& reports) {
    out << "scheme,l_star,min_rate,min_rate_stderr,jain_index,sum_rate\n";
    for (const auto& r : reports) {
        out << to_string(r.scheme) << ',' << r.l_star << ',' << format_number(r.min_rate) << ','
            << format_number(r.min_rate_stderr) << ',' << optional_field(r.jain_index) << ','
            << format_number(r.sum_rate) << '\n';
    }
    check_stream(out);
}

}  // namespace wpcn
