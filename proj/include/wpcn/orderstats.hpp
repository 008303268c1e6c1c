#pragma once

namespace wpcn {

/// Rank n (1-based) among `total` i.i.d. draws.
struct OrderStatSpec {
    int n = 1;
    int total = 1;
};

inline constexpr double kEulerMascheroni = 0.57721566490153286061;

/// Throws DomainError unless 1 <= n <= total.
void validate(const OrderStatSpec& spec);

/// psi(n) = -gamma + H_{n-1}, summed exactly with compensation.
double digamma_int(int n);

/// ln( N! / ((n-1)! (N-n)!) ), the normalising constant of the n-th order statistic density.
double log_order_coefficient(const OrderStatSpec& spec);

/// P(Z_(n) <= z) given the parent CDF value u = F(z); regularized incomplete beta I_u(n, N-n+1).
double order_cdf(const OrderStatSpec& spec, double u);

/// Same quantity as the binomial tail sum_{i=n}^{N} C(N,i) u^i (1-u)^{N-i}.
double order_cdf_binomial(const OrderStatSpec& spec, double u);

/// Density of the n-th smallest of N uniform draws on [0, r_e], evaluated at r.
double order_pdf_uniform(const OrderStatSpec& spec, double r, double r_e);

/// E[ln R_(n)] = ln r_e + psi(n) - psi(N+1) for uniform parents on [0, r_e].
double expected_log_distance(const OrderStatSpec& spec, double r_e);

}  // namespace wpcn
