#pragma once

#include "wpcn/config.hpp"
#include "wpcn/montecarlo.hpp"
#include "wpcn/rates.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wpcn {

enum class Scheme { FairnessAwareNoma, RandomGroupingNoma, Tdma };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

/// Worst (largest-rank) user of each group; absent for an empty group.
struct GroupMinima {
    std::optional<double> interfered;     ///< r_(l)^l
    std::optional<double> noninterfered;  ///< r_(N)^l

    /// min over the present groups: the max-min objective at this l.
    double objective() const;
};

GroupMinima group_minima(int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                         Method method = Method::Exact, const McOptions& mc = {});

struct FairnessReport {
    Scheme scheme = Scheme::FairnessAwareNoma;
    int l_star = 0;
    double min_rate = 0.0;
    /// Absent when every rate is zero.
    std::optional<double> jain_index;
    double sum_rate = 0.0;
    /// Standard error of min_rate when it is a Monte Carlo estimate (random grouping).
    double min_rate_stderr = 0.0;
    RateProfile profile;
};

struct OptimalGroupSize {
    int l_star = 0;
    double objective = 0.0;
    /// The bisection's monotonicity checks failed and every l was evaluated.
    bool used_scan = false;
    /// Distinct l values whose group minima were evaluated.
    int evaluations = 0;
};

/**
 * argmax_l min(r_(l)^l, r_(N)^l), smallest l on ties.
 *
 * Integer bisection on the sign of r_(l)^l - r_(N)^l over [1, N-1] finds the
 * crossing; the objective is then compared at l = 0 and the two bracketing
 * integers. The answer is accepted only if the probed minima (always
 * including l = 1 and 2) are monotone (interfered nonincreasing,
 * non-interfered nondecreasing) and neither neighbour of l* beats it;
 * otherwise every l in [0, N] is scanned.
 */
OptimalGroupSize find_optimal_l(const NetworkConfig& cfg, const DerivedConstants& dc,
                                Method method = Method::Exact, const McOptions& mc = {});

/// Fairness-aware report at the optimal l.
FairnessReport optimal_l(const NetworkConfig& cfg, const DerivedConstants& dc, Method method = Method::Exact,
                         const McOptions& mc = {});

/// (sum r)^2 / (N sum r^2). Throws UndefinedIndex when all rates are zero.
double jain_index(std::span<const double> rates);

/// Min, Jain and sum of a profile, labelled with `scheme` and `l_star`.
FairnessReport report_from_profile(Scheme scheme, int l_star, RateProfile profile);

/// Random grouping at a fixed l: a uniformly random size-l subset of ranks is interfered.
struct RandomGroupingPoint {
    int l = 0;
    McEstimate expected_min;          ///< E[min over users] across random subsets
    std::vector<double> mean_rates;   ///< per-rank expected rate over subsets
};

RandomGroupingPoint random_grouping_at(int l, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                                       const McOptions& mc);

/**
 * Tdma: ordered profile at l = 0. FairnessAwareNoma: profile at the optimal l.
 * RandomGroupingNoma: l maximising the expected min-rate over random subsets.
 */
FairnessReport evaluate_scheme(Scheme scheme, const NetworkConfig& cfg, const DerivedConstants& dc,
                               Method method = Method::Exact, const McOptions& mc = {});

/// The scheme evaluated with its group size pinned to l (Tdma ignores l).
FairnessReport evaluate_scheme_at(Scheme scheme, int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                  Method method = Method::Exact, const McOptions& mc = {});

}  // namespace wpcn
