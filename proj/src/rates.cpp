#include "wpcn/rates.hpp"

#include "wpcn/error.hpp"
#include "wpcn/orderstats.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace wpcn {

namespace {

void check_args(int n, int l, const NetworkConfig& cfg) {
    validate(OrderStatSpec{n, cfg.n_users});
    if (l < 0 || l > cfg.n_users) throw DomainError("interference group size " + std::to_string(l) + " outside [0, N]");
}

// ln(1 + e^t) without overflow.
double log1p_exp(double t) { return t > 30.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Asymptotic: return "asymptotic";
        case Method::MonteCarlo: return "mc";
    }
    return "exact";
}

Method parse_method(std::string_view text) {
    if (text == "exact") return Method::Exact;
    if (text == "asymptotic") return Method::Asymptotic;
    if (text == "mc" || text == "montecarlo") return Method::MonteCarlo;
    throw InvalidConfig("unknown method '" + std::string(text) + "' (expected exact, asymptotic or mc)");
}

Group group_of(int n, int l) { return n <= l ? Group::Interference : Group::NonInterference; }

namespace {

double multiplier_for(Group g, int l, const DerivedConstants& dc) {
    return g == Group::Interference ? l - 1 + dc.kappa : l + dc.kappa;
}

QuadratureResult exact_for(int n, int l, Group g, const NetworkConfig& cfg, const DerivedConstants& dc,
                           double rel_tol) {
    const double alpha = cfg.path_loss_exp;
    double c = multiplier_for(g, l, dc) * dc.a * std::pow(cfg.wet_radius, -2.0 * alpha);
    if (g == Group::Interference) c /= dc.b;
    return ordered_rate_integral(n, cfg.n_users, c, cfg.dist_ps_ap / cfg.wet_radius, alpha, cfg.tau0, rel_tol);
}

AsymptoticRate asymptotic_for(int n, int l, Group g, const NetworkConfig& cfg, const DerivedConstants& dc) {
    const double multiplier = multiplier_for(g, l, dc);
    if (multiplier <= 0.0) return {};
    const double log_snr_scale =
        std::log(g == Group::Interference ? dc.a / dc.b : dc.a) + std::log(multiplier);
    const double log_distance = std::log(cfg.wet_radius * cfg.dist_ps_ap) + digamma_int(n) -
                                digamma_int(cfg.n_users + 1);
    const double raw = (1.0 - cfg.tau0) / (cfg.n_users * std::numbers::ln2) *
                       (log_snr_scale - cfg.path_loss_exp * log_distance);
    return raw < 0.0 ? AsymptoticRate{0.0, true} : AsymptoticRate{raw, false};
}

}  // namespace

double snr_multiplier(int n, int l, const DerivedConstants& dc) { return multiplier_for(group_of(n, l), l, dc); }

QuadratureResult ordered_rate_integral(int n, int total, double c, double rho, double alpha, double tau0,
                                       double rel_tol) {
    const OrderStatSpec spec{n, total};
    validate(spec);
    if (c <= 0.0) return {};
    const double log_c = std::log(c);
    const double log_coef = log_order_coefficient(spec);
    const double below = n - 1.0;
    const double above = static_cast<double>(total - n);

    const auto integrand = [&](double x) {
        double log_weight = log_coef;
        if (below > 0.0) log_weight += below * std::log(x);
        if (above > 0.0) log_weight += above * std::log1p(-x);
        const double log_snr = log_c - alpha * std::log(x * (rho - x));
        return std::exp(log_weight) * log1p_exp(log_snr) / std::numbers::ln2;
    };

    // Breakpoints around the beta kernel's mass keep narrow peaks (large N) inside a panel.
    const double mean = n / (total + 1.0);
    const double sd = std::sqrt(n * (total - n + 1.0) / ((total + 1.0) * (total + 1.0) * (total + 2.0)));
    const std::array<double, 5> breaks{mean - 6.0 * sd, mean - 2.0 * sd, mean, mean + 2.0 * sd, mean + 6.0 * sd};

    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    auto result = integrate_unit_interval(integrand, breaks, opts);
    const double scale = (1.0 - tau0) / total;
    result.value *= scale;
    result.error *= scale;
    return result;
}

QuadratureResult rate_exact_detailed(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                     double rel_tol) {
    check_args(n, l, cfg);
    return exact_for(n, l, group_of(n, l), cfg, dc, rel_tol);
}

double rate_exact(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc) {
    return rate_exact_detailed(n, l, cfg, dc).value;
}

AsymptoticRate rate_asymptotic_detailed(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc) {
    check_args(n, l, cfg);
    return asymptotic_for(n, l, group_of(n, l), cfg, dc);
}

double rate_asymptotic(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc) {
    return rate_asymptotic_detailed(n, l, cfg, dc).value;
}

double rate_with_membership(int n, int l, Group g, const NetworkConfig& cfg, const DerivedConstants& dc,
                            Method method) {
    check_args(n, l, cfg);
    switch (method) {
        case Method::Exact: return exact_for(n, l, g, cfg, dc, kRateRelTol).value;
        case Method::Asymptotic: return asymptotic_for(n, l, g, cfg, dc).value;
        case Method::MonteCarlo: break;
    }
    throw DomainError("rate_with_membership supports exact and asymptotic rates only");
}

RateProfile rate_profile(int l, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                         const McOptions& mc) {
    if (l < 0 || l > cfg.n_users) throw DomainError("interference group size " + std::to_string(l) + " outside [0, N]");
    RateProfile p;
    p.l = l;
    p.method = method;
    const int total = cfg.n_users;
    p.rates.reserve(static_cast<std::size_t>(total));
    for (int n = 1; n <= total; ++n) {
        p.group_of.push_back(group_of(n, l));
        if (snr_multiplier(n, l, dc) <= 0.0) ++p.degenerate_ranks;
    }

    switch (method) {
        case Method::Exact:
            for (int n = 1; n <= total; ++n) p.rates.push_back(rate_exact(n, l, cfg, dc));
            break;
        case Method::Asymptotic:
            for (int n = 1; n <= total; ++n) {
                const auto r = rate_asymptotic_detailed(n, l, cfg, dc);
                p.rates.push_back(r.value);
                if (r.clamped) ++p.clamped_ranks;
            }
            break;
        case Method::MonteCarlo: {
            const auto sim = simulate_rates(l, cfg, dc, mc);
            for (const auto& e : sim.per_rank) p.rates.push_back(e.mean);
            break;
        }
    }
    return p;
}

double sum_rate(const RateProfile& profile) {
    double s = 0.0;
    for (double r : profile.rates) s += r;
    return s;
}

}  // namespace wpcn
