#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/orderstats.hpp"
#include "wpcn/rates.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace wpcn;

namespace {

// Independent oracle: integrate over the distance r itself with tanh-sinh.
double rate_in_distance_domain(int n, int l, const NetworkConfig& cfg) {
    const auto dc = derive_constants(cfg);
    const bool interfered = n <= l;
    const double mult = interfered ? l - 1 + dc.kappa : l + dc.kappa;
    if (mult <= 0.0) return 0.0;
    const double scale = mult * dc.a / (interfered ? dc.b : 1.0);
    const int total = cfg.n_users;
    const double log_coef = std::lgamma(total + 1.0) - std::lgamma(n) - std::lgamma(total - n + 1.0);
    const double r_e = cfg.wet_radius;
    const double r_d = cfg.dist_ps_ap;
    const auto f = [&](double r) {
        const double u = r / r_e;
        const double density =
            std::exp(log_coef + (n - 1) * std::log(u) + (total - n) * std::log1p(-u)) / r_e;
        const double t = std::log(scale) - cfg.path_loss_exp * std::log(r * (r_d - r));
        return density * (t > 40.0 ? t : std::log1p(std::exp(t))) / std::log(2.0);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    return dc.tau_n * integrator.integrate(f, 0.0, r_e, 1e-12);
}

}  // namespace

TEST_CASE("exact rates on the reference scenario") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    struct Case {
        int n, l;
        double expected;
    };
    // High-precision reference values computed offline.
    const Case cases[] = {{1, 0, 0.540290446761623},   {20, 0, 0.015087908428775837}, {5, 8, 0.15820967072394598},
                          {8, 8, 0.08416519770278506}, {20, 8, 0.08008020633002554},  {1, 20, 0.622449495586735},
                          {20, 20, 0.04101117473968935}};
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.l);
        CHECK(rate_exact(c.n, c.l, cfg, dc) == doctest::Approx(c.expected).epsilon(1e-8));
    }
}

TEST_CASE("exact rate for a single user with a long charging slot") {
    NetworkConfig cfg;
    cfg.n_users = 1;
    cfg.tau0 = 0.5;
    const auto dc = derive_constants(cfg);
    CHECK(dc.kappa == doctest::Approx(1.0));
    CHECK(rate_exact(1, 0, cfg, dc) == doctest::Approx(1.0869050465322474).epsilon(1e-8));
}

TEST_CASE("exact rates agree with a distance-domain oracle") {
    NetworkConfig cfg;
    for (int total : {1, 3, 20, 60}) {
        cfg.n_users = total;
        cfg.tau0 = 1.0 / (total + 1.0);
        const auto dc = derive_constants(cfg);
        for (int n : {1, (total + 1) / 2, total}) {
            for (int l : {0, total / 2, total}) {
                CAPTURE(total);
                CAPTURE(n);
                CAPTURE(l);
                CHECK(rate_exact(n, l, cfg, dc) == doctest::Approx(rate_in_distance_domain(n, l, cfg)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("tightening the tolerance stays within the error estimate") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    for (int n : {1, 8, 20}) {
        const auto coarse = rate_exact_detailed(n, 8, cfg, dc, 1e-6);
        const auto fine = rate_exact_detailed(n, 8, cfg, dc, 1e-11);
        CHECK(std::abs(coarse.value - fine.value) <= std::max(coarse.error, 1e-14) + 1e-6 * fine.value);
    }
}

TEST_CASE("ordered_rate_integral carries the interference factor in c") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    const double alpha = cfg.path_loss_exp;
    const double rho = cfg.dist_ps_ap / cfg.wet_radius;
    const int l = 8;
    const double c = (l - 1 + dc.kappa) * dc.a * std::pow(cfg.wet_radius, -2.0 * alpha) / dc.b;
    CHECK(ordered_rate_integral(5, 20, c, rho, alpha, cfg.tau0).value ==
          doctest::Approx(rate_exact(5, l, cfg, dc)).epsilon(1e-12));
    CHECK(ordered_rate_integral(5, 20, 0.0, rho, alpha, cfg.tau0).value == 0.0);
}

TEST_CASE("rates decrease with rank") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    for (int l : {0, 8, 20}) {
        for (Method m : {Method::Exact, Method::Asymptotic}) {
            const auto p = rate_profile(l, cfg, dc, m);
            for (std::size_t k = 1; k < p.rates.size(); ++k) {
                if (p.group_of[k] != p.group_of[k - 1]) continue;
                // clamped asymptotic values may tie at zero
                if (m == Method::Exact) CHECK(p.rates[k] < p.rates[k - 1]);
                else CHECK(p.rates[k] <= p.rates[k - 1]);
            }
        }
    }
}

TEST_CASE("group minima move in opposite directions as l grows") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    for (int l = 1; l < cfg.n_users; ++l) CHECK(rate_exact(l + 1, l + 1, cfg, dc) < rate_exact(l, l, cfg, dc));
    for (int l = 0; l + 1 < cfg.n_users; ++l) {
        CHECK(rate_exact(cfg.n_users, l + 1, cfg, dc) > rate_exact(cfg.n_users, l, cfg, dc));
    }
    NetworkConfig far = cfg;
    far.wet_radius = 1.0;
    const auto far_dc = derive_constants(far);
    for (int l = 0; l + 1 < far.n_users; ++l) {
        CHECK(rate_asymptotic(far.n_users, l + 1, far, far_dc) > rate_asymptotic(far.n_users, l, far, far_dc));
    }
}

TEST_CASE("group labels and membership") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    const auto tdma = rate_profile(0, cfg, dc, Method::Exact);
    CHECK(std::all_of(tdma.group_of.begin(), tdma.group_of.end(), [](Group g) { return g == Group::NonInterference; }));
    const auto full = rate_profile(cfg.n_users, cfg, dc, Method::Exact);
    CHECK(std::all_of(full.group_of.begin(), full.group_of.end(), [](Group g) { return g == Group::Interference; }));
    CHECK(snr_multiplier(3, 0, dc) == doctest::Approx(dc.kappa));
    CHECK(snr_multiplier(3, 5, dc) == doctest::Approx(4.0 + dc.kappa));
    CHECK(snr_multiplier(6, 5, dc) == doctest::Approx(5.0 + dc.kappa));
    CHECK(rate_with_membership(6, 5, Group::NonInterference, cfg, dc, Method::Exact) ==
          rate_exact(6, 5, cfg, dc));
    CHECK(rate_with_membership(6, 5, Group::Interference, cfg, dc, Method::Exact) <
          rate_exact(6, 5, cfg, dc));
    CHECK_THROWS_AS(rate_with_membership(6, 5, Group::Interference, cfg, dc, Method::MonteCarlo), DomainError);
    CHECK_THROWS_AS(rate_exact(0, 5, cfg, dc), DomainError);
    CHECK_THROWS_AS(rate_exact(3, 21, cfg, dc), DomainError);
    CHECK_THROWS_AS(rate_profile(-1, cfg, dc, Method::Exact), DomainError);
}

TEST_CASE("no charging slot and a lone interfered user harvests nothing") {
    NetworkConfig cfg;
    cfg.tau0 = 0.0;
    const auto dc = derive_constants(cfg);
    CHECK(rate_exact(1, 1, cfg, dc) == 0.0);
    CHECK(rate_asymptotic(1, 1, cfg, dc) == 0.0);
    const auto p = rate_profile(1, cfg, dc, Method::Exact);
    CHECK(p.degenerate_ranks == 1);
    CHECK(p.rates[1] > 0.0);
    // TDMA without a charging slot has nothing to transmit with.
    CHECK(sum_rate(rate_profile(0, cfg, dc, Method::Exact)) == 0.0);
}

TEST_CASE("sum_rate") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    const auto p = rate_profile(8, cfg, dc, Method::Exact);
    CHECK(sum_rate(p) == doctest::Approx(std::accumulate(p.rates.begin(), p.rates.end(), 0.0)).epsilon(1e-15));
    CHECK(sum_rate(p) == doctest::Approx(3.2293).epsilon(1e-4));
}

TEST_CASE("exact rates agree with a brute-force simulation for small N") {
    // Own sampler, sort and SNR formula; shares nothing with the library's simulator.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int total : {1, 2, 4}) {
        NetworkConfig cfg;
        cfg.n_users = total;
        cfg.tau0 = 0.2;
        const auto dc = derive_constants(cfg);
        for (int l = 0; l <= total; ++l) {
            const int trials = 100000;
            std::vector<double> sum(total, 0.0), sum_sq(total, 0.0), x(total);
            for (int t = 0; t < trials; ++t) {
                for (auto& v : x) {
                    const double r = cfg.wet_radius * unit(rng);
                    v = r * (cfg.dist_ps_ap - r);
                }
                std::sort(x.begin(), x.end());
                for (int k = 0; k < total; ++k) {
                    const bool interfered = k < l;
                    const double mult = interfered ? l - 1 + dc.kappa : l + dc.kappa;
                    const double snr = mult * dc.a / (interfered ? dc.b : 1.0) / std::pow(x[k], cfg.path_loss_exp);
                    const double rate = dc.tau_n * std::log2(1.0 + snr);
                    sum[k] += rate;
                    sum_sq[k] += rate * rate;
                }
            }
            for (int k = 0; k < total; ++k) {
                const double mean = sum[k] / trials;
                const double se = std::sqrt(std::max(sum_sq[k] / trials - mean * mean, 0.0) / trials);
                CAPTURE(total);
                CAPTURE(l);
                CAPTURE(k);
                CHECK(std::abs(rate_exact(k + 1, l, cfg, dc) - mean) <= 4.0 * se + 1e-12);
            }
        }
    }
}

TEST_CASE("asymptotic rate approaches the exact rate as r_d / r_e grows") {
    NetworkConfig cfg;
    cfg.dist_ps_ap = 50.0;
    double previous = 1e300;
    for (double r_e : {20.0, 5.0, 1.0, 0.2}) {
        cfg.wet_radius = r_e;
        const auto dc = derive_constants(cfg);
        double worst = 0.0;
        for (int l : {0, 8, 20}) {
            for (int n = 1; n <= cfg.n_users; ++n) {
                const double exact = rate_exact(n, l, cfg, dc);
                if (exact > 0.0) worst = std::max(worst, std::abs(rate_asymptotic(n, l, cfg, dc) - exact) / exact);
            }
        }
        CHECK(worst < previous);
        previous = worst;
    }
    CHECK(previous < 0.02);
}

TEST_CASE("asymptotic clamping is reported") {
    NetworkConfig cfg;
    cfg.noise_power_dbm = 0.0;
    cfg.interference_power_dbm = 7.0;
    const auto dc = derive_constants(cfg);
    const auto p = rate_profile(0, cfg, dc, Method::Asymptotic);
    CHECK(p.clamped_ranks > 0);
    CHECK(std::all_of(p.rates.begin(), p.rates.end(), [](double r) { return r >= 0.0; }));
    CHECK(parse_method("mc") == Method::MonteCarlo);
    CHECK_THROWS_AS(parse_method("guess"), InvalidConfig);
}
