#pragma once

#include "wpcn/config.hpp"
#include "wpcn/montecarlo.hpp"
#include "wpcn/quadrature.hpp"

#include <string_view>
#include <vector>

namespace wpcn {

enum class Method { Exact, Asymptotic, MonteCarlo };
enum class Group { Interference, NonInterference };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// Relative tolerance of the exact-rate quadrature.
inline constexpr double kRateRelTol = 1e-8;

/**
 * Expected rate of every ordered user for one interference-group size.
 * Index k holds rank k + 1 (ascending equivalent distance); ranks 1..l are
 * in the interference group.
 */
struct RateProfile {
    int l = 0;
    std::vector<double> rates;
    std::vector<Group> group_of;
    Method method = Method::Exact;
    /// Ranks whose asymptotic value went negative and was clamped to 0.
    int clamped_ranks = 0;
    /// Ranks with zero harvested energy (tau_0 = 0 and l = 1).
    int degenerate_ranks = 0;
};

Group group_of(int n, int l);

/// (l - 1 + kappa) for interfered ranks, (l + kappa) otherwise.
double snr_multiplier(int n, int l, const DerivedConstants& dc);

/**
 * (1 - tau_0)/N * E[log2(1 + c / [x (rho - x)]^alpha)] with x ~ Beta(n, N - n + 1),
 * i.e. the beta-weighted integral shared by both groups; `c` carries the
 * multiplier, a, r_e^{-2 alpha} and (for interfered ranks) the 1/b factor.
 */
QuadratureResult ordered_rate_integral(int n, int total, double c, double rho, double alpha, double tau0,
                                       double rel_tol = kRateRelTol);

/// Exact expected rate of rank n with an interference group of size l.
double rate_exact(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc);
QuadratureResult rate_exact_detailed(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                     double rel_tol = kRateRelTol);

struct AsymptoticRate {
    double value = 0.0;
    bool clamped = false;  ///< raw high-SNR expression was negative
};

/// High-SNR, r_d >> 2 r_e closed form built from digamma values.
double rate_asymptotic(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc);
AsymptoticRate rate_asymptotic_detailed(int n, int l, const NetworkConfig& cfg, const DerivedConstants& dc);

/**
 * Rate of rank n with an interference group of size l when its membership is
 * `g` rather than implied by n <= l, as needed for random grouping. Exact or
 * Asymptotic only.
 */
double rate_with_membership(int n, int l, Group g, const NetworkConfig& cfg, const DerivedConstants& dc,
                            Method method);

/// Exact or asymptotic rates for ranks 1..N; MonteCarlo runs simulate_rates with `mc`.
RateProfile rate_profile(int l, const NetworkConfig& cfg, const DerivedConstants& dc, Method method,
                         const McOptions& mc = {});

double sum_rate(const RateProfile& profile);

}  // namespace wpcn
