#pragma once

#include "wpcn/config.hpp"
#include "wpcn/grouping.hpp"
#include "wpcn/montecarlo.hpp"
#include "wpcn/rates.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wpcn {

inline constexpr std::string_view kVersion = "0.1.0";

enum class SweepParameter { GroupSizeL, Tau0, NumUsers };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Tau0;
    std::vector<double> values;
    std::vector<Scheme> schemes{Scheme::FairnessAwareNoma, Scheme::RandomGroupingNoma, Scheme::Tdma};
    Method method = Method::Exact;
    McOptions mc;
};

/// Nonempty, strictly increasing, each value in the parameter's domain. Throws InvalidConfig.
void validate(const SweepSpec& spec, const NetworkConfig& cfg);

/// 0, 0.02, ..., 0.30.
std::vector<double> default_tau0_grid();

/// What a CSV's comment header records.
struct RunMetadata {
    std::string command;
    Method method = Method::Exact;
    McOptions mc;
};

/// `#`-prefixed lines: version, command, method, seed, trials, generator and every config field.
void write_metadata(std::ostream& out, const RunMetadata& meta, const NetworkConfig& cfg);

struct MinVsLRow {
    int l = 0;
    GroupMinima minima;
};

struct MinVsLTable {
    std::vector<MinVsLRow> rows;  ///< l = 0..N
    int l_star = 0;
};

/// Columns: l, min_interfered, min_noninterfered, overall_min, optimal. Empty field for an empty group.
MinVsLTable run_fig_min_vs_l(const NetworkConfig& cfg, Method method, const McOptions& mc, std::ostream& out);

/**
 * Columns: n, then rate_l<l> for each requested l. l = 0 (TDMA) and the optimal
 * l are always included; columns appear in increasing l.
 */
std::vector<RateProfile> run_fig_rate_vs_rank(const NetworkConfig& cfg, std::vector<int> l_values, Method method,
                                              const McOptions& mc, std::ostream& out);

struct SweepRow {
    double value = 0.0;
    Scheme scheme = Scheme::Tdma;
    std::optional<FairnessReport> report;
    std::string status = "ok";  ///< error text for a failed point
};

/**
 * One row per (value, scheme) in sweep order. A point that fails to evaluate
 * still produces a row, with empty metric fields and the error in `status`.
 * Columns: <parameter>, scheme, min_rate, min_rate_stderr, jain_index, sum_rate, l_star, status.
 */
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const NetworkConfig& cfg, std::ostream& out);

/// Header line plus one line per report (used by the `eval` command).
void write_reports(std::ostream& out, const std::vector<FairnessReport>& reports);

}  // namespace wpcn
