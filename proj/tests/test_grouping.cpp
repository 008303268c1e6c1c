#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/grouping.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace wpcn;

namespace {

int scan_optimum(const NetworkConfig& cfg, const DerivedConstants& dc) {
    int best = 0;
    double value = -1.0;
    for (int l = 0; l <= cfg.n_users; ++l) {
        const double v = group_minima(l, cfg, dc).objective();
        if (v > value) {
            value = v;
            best = l;
        }
    }
    return best;
}

NetworkConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NetworkConfig cfg;
    cfg.n_users = 1 + static_cast<int>(rng() % 30);
    cfg.wet_radius = 5.0 + 20.0 * unit(rng);
    cfg.dist_ps_ap = 2.0 * cfg.wet_radius + 60.0 * unit(rng);
    cfg.path_loss_exp = 2.2 + 1.8 * unit(rng);
    cfg.tau0 = 0.3 * unit(rng);
    cfg.noise_power_dbm = -80.0 + 20.0 * unit(rng);
    cfg.interference_power_dbm = -75.0 + 25.0 * unit(rng);
    return cfg;
}

}  // namespace

TEST_CASE("group minima at the ends") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    const auto none = group_minima(0, cfg, dc);
    CHECK_FALSE(none.interfered);
    REQUIRE(none.noninterfered);
    CHECK(none.objective() == *none.noninterfered);
    const auto all = group_minima(cfg.n_users, cfg, dc);
    CHECK_FALSE(all.noninterfered);
    CHECK(all.objective() == *all.interfered);
    CHECK(GroupMinima{}.objective() == 0.0);
    CHECK_THROWS_AS(group_minima(21, cfg, dc), DomainError);
}

TEST_CASE("optimal group size on the reference scenario") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    const auto best = find_optimal_l(cfg, dc);
    CHECK(best.l_star == 8);
    CHECK_FALSE(best.used_scan);
    CHECK(best.evaluations < cfg.n_users + 1);
    CHECK(best.objective == doctest::Approx(0.08008020633002554).epsilon(1e-8));
    // the worst interfered user crosses below the worst free user between l* and l* + 1
    const auto at = group_minima(8, cfg, dc);
    const auto next = group_minima(9, cfg, dc);
    CHECK(*at.interfered > *at.noninterfered);
    CHECK(*next.interfered <= *next.noninterfered);
}

TEST_CASE("single user") {
    NetworkConfig cfg;
    cfg.n_users = 1;
    cfg.tau0 = 0.5;
    const auto dc = derive_constants(cfg);
    // alone in the group the user charges only during tau0 and suffers interference
    CHECK(find_optimal_l(cfg, dc).l_star == 0);
}

TEST_CASE("short charging slot breaks monotonicity at the first step") {
    NetworkConfig cfg;
    cfg.n_users = 2;
    cfg.wet_radius = 10.0;
    cfg.dist_ps_ap = 60.0;
    cfg.path_loss_exp = 2.3;
    cfg.tau0 = 0.006;
    cfg.noise_power_dbm = -79.0;
    cfg.interference_power_dbm = -68.0;
    const auto dc = derive_constants(cfg);
    // the crossing is at l = 1, yet l = 2 gives the lone interfered pair more charging time
    CHECK(*group_minima(2, cfg, dc).interfered > *group_minima(1, cfg, dc).interfered);
    const auto best = find_optimal_l(cfg, dc);
    CHECK(best.l_star == scan_optimum(cfg, dc));
    CHECK(best.used_scan);
}

TEST_CASE("bisection agrees with an exhaustive scan") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_config(rng);
        const auto dc = derive_constants(cfg);
        CAPTURE(i);
        CHECK(find_optimal_l(cfg, dc).l_star == scan_optimum(cfg, dc));
    }
}

TEST_CASE("jain index") {
    const std::vector<double> equal(7, 0.3);
    CHECK(jain_index(equal) == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<double> one{0.0, 0.0, 0.0, 2.0};
    CHECK(jain_index(one) == doctest::Approx(0.25).epsilon(1e-15));
    const std::vector<double> ramp{1.0, 2.0, 3.0};
    CHECK(jain_index(ramp) == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
    const std::vector<double> scaled{5.0, 10.0, 15.0};
    CHECK(jain_index(scaled) == doctest::Approx(jain_index(ramp)).epsilon(1e-15));
    const std::vector<double> zeros(3, 0.0);
    CHECK_THROWS_AS(jain_index(zeros), UndefinedIndex);
    CHECK_THROWS_AS(jain_index(std::vector<double>{}), UndefinedIndex);
}

TEST_CASE("scheme reports on the reference scenario") {
    const NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    McOptions mc;
    mc.trials = 20000;
    const auto fa = evaluate_scheme(Scheme::FairnessAwareNoma, cfg, dc);
    const auto rg = evaluate_scheme(Scheme::RandomGroupingNoma, cfg, dc, Method::Exact, mc);
    const auto tdma = evaluate_scheme(Scheme::Tdma, cfg, dc);

    CHECK(fa.l_star == 8);
    CHECK(tdma.l_star == 0);
    for (const auto* r : {&fa, &tdma}) {
        CHECK(r->min_rate == *std::min_element(r->profile.rates.begin(), r->profile.rates.end()));
        CHECK(r->sum_rate == doctest::Approx(sum_rate(r->profile)).epsilon(1e-15));
        REQUIRE(r->jain_index);
        CHECK(*r->jain_index == doctest::Approx(jain_index(r->profile.rates)).epsilon(1e-15));
    }
    CHECK(fa.min_rate >= rg.min_rate);
    CHECK(rg.min_rate >= tdma.min_rate);
    CHECK(*fa.jain_index >= *rg.jain_index);
    CHECK(*rg.jain_index >= *tdma.jain_index);
    CHECK(fa.sum_rate > tdma.sum_rate);
    CHECK(rg.sum_rate > tdma.sum_rate);

    const auto tdma_profile = rate_profile(0, cfg, dc, Method::Exact);
    CHECK(tdma.profile.rates == tdma_profile.rates);
    CHECK(evaluate_scheme_at(Scheme::FairnessAwareNoma, 0, cfg, dc).profile.rates == tdma_profile.rates);
    CHECK(evaluate_scheme_at(Scheme::Tdma, 13, cfg, dc).l_star == 0);
}

TEST_CASE("without a charging slot TDMA starves and NOMA does not") {
    NetworkConfig cfg;
    cfg.tau0 = 0.0;
    const auto dc = derive_constants(cfg);
    const auto tdma = evaluate_scheme(Scheme::Tdma, cfg, dc);
    CHECK(tdma.min_rate == 0.0);
    CHECK_FALSE(tdma.jain_index);
    const auto fa = evaluate_scheme(Scheme::FairnessAwareNoma, cfg, dc);
    CHECK(fa.min_rate > 0.0);
    CHECK(fa.l_star >= 2);
}

TEST_CASE("random grouping") {
    NetworkConfig cfg;
    const auto dc = derive_constants(cfg);
    McOptions mc;
    mc.trials = 20000;

    SUBCASE("deterministic ends") {
        const auto none = random_grouping_at(0, cfg, dc, Method::Exact, mc);
        CHECK(none.expected_min.mean == doctest::Approx(rate_exact(20, 0, cfg, dc)).epsilon(1e-15));
        CHECK(none.expected_min.std_error == 0.0);
        const auto all = random_grouping_at(20, cfg, dc, Method::Exact, mc);
        CHECK(all.expected_min.mean == doctest::Approx(rate_exact(20, 20, cfg, dc)).epsilon(1e-15));
    }

    SUBCASE("mean rates mix the two memberships") {
        const auto p = random_grouping_at(5, cfg, dc, Method::Exact, mc);
        const double expected = 0.25 * rate_with_membership(3, 5, Group::Interference, cfg, dc, Method::Exact) +
                                0.75 * rate_with_membership(3, 5, Group::NonInterference, cfg, dc, Method::Exact);
        CHECK(p.mean_rates[2] == doctest::Approx(expected).epsilon(1e-14));
        CHECK(p.expected_min.mean <= *std::min_element(p.mean_rates.begin(), p.mean_rates.end()));
        const auto again = random_grouping_at(5, cfg, dc, Method::Exact, mc);
        CHECK(again.expected_min.mean == p.expected_min.mean);
    }

    SUBCASE("a long charging slot makes random grouping collapse to TDMA") {
        cfg.tau0 = 0.2;
        const auto dc2 = derive_constants(cfg);
        const auto rg = evaluate_scheme(Scheme::RandomGroupingNoma, cfg, dc2, Method::Exact, mc);
        const auto tdma = evaluate_scheme(Scheme::Tdma, cfg, dc2);
        CHECK(rg.l_star == 0);
        CHECK(rg.min_rate == tdma.min_rate);
    }

    SUBCASE("unmet precision target") {
        mc.trials = 4096;
        mc.target_stderr = 1e-9;
        CHECK_THROWS_AS(random_grouping_at(5, cfg, dc, Method::Exact, mc), McBudgetExceeded);
    }

    CHECK_THROWS_AS(random_grouping_at(-1, cfg, dc, Method::Exact, mc), DomainError);
}

TEST_CASE("scheme names") {
    CHECK(parse_scheme("fa") == Scheme::FairnessAwareNoma);
    CHECK(parse_scheme("random_grouping_noma") == Scheme::RandomGroupingNoma);
    CHECK(to_string(Scheme::Tdma) == "tdma");
    CHECK_THROWS_AS(parse_scheme("ofdma"), InvalidConfig);
}
