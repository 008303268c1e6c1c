#include "wpcn/orderstats.hpp"

#include "wpcn/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <string>

namespace wpcn {

namespace {

void check_probability(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("parent CDF value outside [0, 1]");
}

// k * ln(y) with the convention 0 * ln(0) = 0.
double xlogy(double k, double y) { return k == 0.0 ? 0.0 : k * std::log(y); }

}  // namespace

void validate(const OrderStatSpec& spec) {
    if (spec.total < 1 || spec.n < 1 || spec.n > spec.total) {
        throw DomainError("order statistic rank " + std::to_string(spec.n) + " outside [1, " +
                          std::to_string(spec.total) + "]");
    }
}

double digamma_int(int n) {
    if (n < 1) throw DomainError("digamma_int requires n >= 1");
    // Neumaier summation of -gamma + 1 + 1/2 + ... + 1/(n-1).
    double sum = -kEulerMascheroni;
    double comp = 0.0;
    for (int k = 1; k < n; ++k) {
        const double term = 1.0 / k;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double log_order_coefficient(const OrderStatSpec& spec) {
    validate(spec);
    return std::lgamma(spec.total + 1.0) - std::lgamma(static_cast<double>(spec.n)) -
           std::lgamma(spec.total - spec.n + 1.0);
}

double order_cdf(const OrderStatSpec& spec, double u) {
    validate(spec);
    check_probability(u);
    return boost::math::ibeta(static_cast<double>(spec.n), static_cast<double>(spec.total - spec.n + 1), u);
}

double order_cdf_binomial(const OrderStatSpec& spec, double u) {
    validate(spec);
    check_probability(u);
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    const int big_n = spec.total;
    const double log_u = std::log(u);
    const double log_1mu = std::log1p(-u);
    const double log_nfact = std::lgamma(big_n + 1.0);
    double sum = 0.0;
    for (int i = big_n; i >= spec.n; --i) {
        const double log_choose = log_nfact - std::lgamma(i + 1.0) - std::lgamma(big_n - i + 1.0);
        sum += std::exp(log_choose + i * log_u + (big_n - i) * log_1mu);
    }
    return sum;
}

double order_pdf_uniform(const OrderStatSpec& spec, double r, double r_e) {
    validate(spec);
    if (!(r_e > 0.0)) throw DomainError("order_pdf_uniform requires r_e > 0");
    if (!(r >= 0.0 && r <= r_e)) throw DomainError("order_pdf_uniform: r outside [0, r_e]");
    const double below = spec.n - 1.0;
    const double above = static_cast<double>(spec.total - spec.n);
    if ((below > 0.0 && r == 0.0) || (above > 0.0 && r == r_e)) return 0.0;
    const double log_density = log_order_coefficient(spec) + xlogy(below, r) + xlogy(above, r_e - r) -
                               spec.total * std::log(r_e);
    return std::exp(log_density);
}

double expected_log_distance(const OrderStatSpec& spec, double r_e) {
    validate(spec);
    if (!(r_e > 0.0)) throw DomainError("expected_log_distance requires r_e > 0");
    return std::log(r_e) + digamma_int(spec.n) - digamma_int(spec.total + 1);
}

}  // namespace wpcn
