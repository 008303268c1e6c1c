#include "wpcn/grouping.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace wpcn {

namespace {

// Memoised group minima for one (cfg, method); MonteCarlo simulates a whole profile per l.
class MinimaCache {
  public:
    MinimaCache(const NetworkConfig& cfg, const DerivedConstants& dc, Method method, const McOptions& mc)
        : cfg_(cfg), dc_(dc), method_(method), mc_(mc) {}

    const GroupMinima& at(int l) {
        auto it = cache_.find(l);
        if (it == cache_.end()) it = cache_.emplace(l, group_minima(l, cfg_, dc_, method_, mc_)).first;
        return it->second;
    }

    int size() const { return static_cast<int>(cache_.size()); }
    const std::map<int, GroupMinima>& entries() const { return cache_; }

  private:
    const NetworkConfig& cfg_;
    const DerivedConstants& dc_;
    Method method_;
    const McOptions& mc_;
    std::map<int, GroupMinima> cache_;
};

// Probed minima must be monotone for the bisection bracket to be trusted.
bool probes_monotone(const std::map<int, GroupMinima>& probes) {
    std::optional<double> last_interfered;
    std::optional<double> last_free;
    for (const auto& [l, m] : probes) {
        if (m.interfered) {
            if (last_interfered && *m.interfered > *last_interfered) return false;
            last_interfered = m.interfered;
        }
        if (m.noninterfered) {
            if (last_free && *m.noninterfered < *last_free) return false;
            last_free = m.noninterfered;
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::FairnessAwareNoma: return "fairness_aware_noma";
        case Scheme::RandomGroupingNoma: return "random_grouping_noma";
        case Scheme::Tdma: return "tdma";
    }
    return "tdma";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "fairness_aware_noma" || text == "fa") return Scheme::FairnessAwareNoma;
    if (text == "random_grouping_noma" || text == "rg") return Scheme::RandomGroupingNoma;
    if (text == "tdma") return Scheme::Tdma;
    throw InvalidConfig("unknown scheme '" + std::string(text) + "' (expected fa, rg or tdma)");
}

double GroupMinima::objective() const {
    if (interfered && noninterfered) return std::min(*interfered, *noninterfered);
    if (interfered) return *interfered;
    if (noninterfered) return *noninterfered;
    return 0.0;
}

GroupMinima group_minima(int l, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                         const McOptions& mc) {
    const int total = cfg.n_users;
    if (l < 0 || l > total) throw DomainError("interference group size " + std::to_string(l) + " outside [0, N]");
    GroupMinima m;
    if (method == Method::MonteCarlo) {
        const auto sim = simulate_rates(l, cfg, dc, mc);
        if (l >= 1) m.interfered = sim.per_rank[static_cast<std::size_t>(l - 1)].mean;
        if (l < total) m.noninterfered = sim.per_rank.back().mean;
        return m;
    }
    const auto rate = [&](int n) {
        return method == Method::Exact ? rate_exact(n, l, cfg, dc) : rate_asymptotic(n, l, cfg, dc);
    };
    if (l >= 1) m.interfered = rate(l);
    if (l < total) m.noninterfered = rate(total);
    return m;
}

OptimalGroupSize find_optimal_l(const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                                const McOptions& mc) {
    const int total = cfg.n_users;
    MinimaCache cache(cfg, dc, method, mc);
    const auto objective = [&](int l) { return cache.at(l).objective(); };
    const auto gap = [&](int l) {
        const auto& m = cache.at(l);
        return *m.interfered - *m.noninterfered;
    };

    // Smallest l in [1, N-1] whose worst interfered user is no better than the worst
    // non-interfered one; N when there is none.
    int crossing = total;
    if (total >= 2) {
        int lo = 1;
        int hi = total - 1;
        while (lo < hi) {
            const int mid = lo + (hi - lo) / 2;
            if (gap(mid) <= 0.0) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if (gap(lo) <= 0.0) crossing = lo;
    }

    OptimalGroupSize best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int l : {0, crossing - 1, crossing}) {
        if (l < 0 || l > total) continue;
        const double v = objective(l);
        if (v > best.objective || (v == best.objective && l < best.l_star)) {
            best.l_star = l;
            best.objective = v;
        }
    }

    // With a short charging slot the interfered minimum can rise from l = 1 to 2,
    // so that step is always part of the monotonicity check.
    for (int l : {1, 2}) {
        if (l <= total) cache.at(l);
    }
    bool trusted = true;
    for (int l : {best.l_star - 1, best.l_star + 1}) {
        if (l >= 0 && l <= total && objective(l) > best.objective) trusted = false;
    }
    trusted = trusted && probes_monotone(cache.entries());
    if (!trusted) {
        best.used_scan = true;
        best.objective = -std::numeric_limits<double>::infinity();
        for (int l = 0; l <= total; ++l) {
            const double v = objective(l);
            if (v > best.objective) {
                best.l_star = l;
                best.objective = v;
            }
        }
    }
    best.evaluations = cache.size();
    return best;
}

FairnessReport optimal_l(const NetworkConfig& cfg, const DerivedConstants& dc, Method method, const McOptions& mc) {
    const auto best = find_optimal_l(cfg, dc, method, mc);
    return report_from_profile(Scheme::FairnessAwareNoma, best.l_star,
                               rate_profile(best.l_star, cfg, dc, method, mc));
}

double jain_index(std::span<const double> rates) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double r : rates) {
        sum += r;
        sum_sq += r * r;
    }
    if (rates.empty() || sum_sq == 0.0) throw UndefinedIndex("Jain's index is undefined when every rate is zero");
    return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

FairnessReport report_from_profile(Scheme scheme, int l_star, RateProfile profile) {
    FairnessReport r;
    r.scheme = scheme;
    r.l_star = l_star;
    r.min_rate = *std::min_element(profile.rates.begin(), profile.rates.end());
    r.sum_rate = sum_rate(profile);
    if (std::any_of(profile.rates.begin(), profile.rates.end(), [](double v) { return v > 0.0; })) {
        r.jain_index = jain_index(profile.rates);
    }
    r.profile = std::move(profile);
    return r;
}

RandomGroupingPoint random_grouping_at(int l, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                                       const McOptions& mc) {
    const int total = cfg.n_users;
    if (l < 0 || l > total) throw DomainError("interference group size " + std::to_string(l) + " outside [0, N]");
    const auto size = static_cast<std::size_t>(total);

    // Per-rank rate under each membership; only the hypotheses reachable at this l are filled.
    std::vector<double> as_interfered(size, 0.0);
    std::vector<double> as_free(size, 0.0);
    if (method == Method::MonteCarlo) {
        const auto sim = simulate_hypothesis_rates(l, cfg, dc, mc);
        for (std::size_t k = 0; k < size; ++k) {
            as_interfered[k] = sim.interfered[k].mean;
            as_free[k] = sim.noninterfered[k].mean;
        }
    } else {
        for (int n = 1; n <= total; ++n) {
            const auto k = static_cast<std::size_t>(n - 1);
            if (l >= 1) as_interfered[k] = rate_with_membership(n, l, Group::Interference, cfg, dc, method);
            if (l < total) as_free[k] = rate_with_membership(n, l, Group::NonInterference, cfg, dc, method);
        }
    }

    RandomGroupingPoint point;
    point.l = l;
    const double share = static_cast<double>(l) / total;
    for (std::size_t k = 0; k < size; ++k) {
        point.mean_rates.push_back(share * as_interfered[k] + (1.0 - share) * as_free[k]);
    }

    if (l == 0 || l == total) {
        const auto& rates = l == 0 ? as_free : as_interfered;
        point.expected_min.mean = *std::min_element(rates.begin(), rates.end());
        point.expected_min.trials_used = 1;
        return point;
    }

    const auto acc = run_trials(mc, 100 + static_cast<std::uint64_t>(l), 1,
                                [&](RandomStream& rng, std::int64_t trials, MeanAccumulator& a) {
                                    std::vector<int> perm(size);
                                    std::iota(perm.begin(), perm.end(), 0);
                                    for (std::int64_t t = 0; t < trials; ++t) {
                                        // partial Fisher-Yates: perm[0, l) is a uniform l-subset
                                        for (int i = 0; i < l; ++i) {
                                            const auto j = i + static_cast<int>(rng.below(size - i));
                                            std::swap(perm[i], perm[j]);
                                        }
                                        double worst = std::numeric_limits<double>::infinity();
                                        for (int i = 0; i < l; ++i) worst = std::min(worst, as_interfered[perm[i]]);
                                        for (int i = l; i < total; ++i) worst = std::min(worst, as_free[perm[i]]);
                                        const double sample[1] = {worst};
                                        a.add(sample);
                                    }
                                });
    point.expected_min = acc.estimate(0);
    if (mc.target_stderr && acc.max_relative_stderr() > *mc.target_stderr) {
        throw McBudgetExceeded("random grouping at l = " + std::to_string(l) + ": relative standard error " +
                               std::to_string(acc.max_relative_stderr()) + " above target after " +
                               std::to_string(acc.count()) + " subsets");
    }
    return point;
}

namespace {

FairnessReport report_from_random(const RandomGroupingPoint& point, const NetworkConfig& cfg, Method method) {
    RateProfile profile;
    profile.l = point.l;
    profile.method = method;
    profile.rates = point.mean_rates;
    for (int n = 1; n <= cfg.n_users; ++n) profile.group_of.push_back(group_of(n, point.l));
    FairnessReport r = report_from_profile(Scheme::RandomGroupingNoma, point.l, std::move(profile));
    r.min_rate = point.expected_min.mean;
    r.min_rate_stderr = point.expected_min.std_error;
    return r;
}

}  // namespace

FairnessReport evaluate_scheme(Scheme scheme, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                               const McOptions& mc) {
    switch (scheme) {
        case Scheme::Tdma: return report_from_profile(Scheme::Tdma, 0, rate_profile(0, cfg, dc, method, mc));
        case Scheme::FairnessAwareNoma: return optimal_l(cfg, dc, method, mc);
        case Scheme::RandomGroupingNoma: {
            std::optional<RandomGroupingPoint> best;
            for (int l = 0; l <= cfg.n_users; ++l) {
                auto point = random_grouping_at(l, cfg, dc, method, mc);
                if (!best || point.expected_min.mean > best->expected_min.mean) best = std::move(point);
            }
            return report_from_random(*best, cfg, method);
        }
    }
    throw DomainError("unknown scheme");
}

FairnessReport evaluate_scheme_at(Scheme scheme, int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                  Method method, const McOptions& mc) {
    switch (scheme) {
        case Scheme::Tdma: return report_from_profile(Scheme::Tdma, 0, rate_profile(0, cfg, dc, method, mc));
        case Scheme::FairnessAwareNoma:
            return report_from_profile(Scheme::FairnessAwareNoma, l, rate_profile(l, cfg, dc, method, mc));
        case Scheme::RandomGroupingNoma:
            return report_from_random(random_grouping_at(l, cfg, dc, method, mc), cfg, method);
    }
    throw DomainError("unknown scheme");
}

}  // namespace wpcn
