#include "wpcn/quadrature.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace wpcn {

namespace {

// Kronrod abscissae on [0, 1) of the symmetric 15-point rule; odd indices are the Gauss nodes.
constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_unit_interval(const std::function<double(double)>& f,
                                         std::span<const double> interior_breaks,
                                         const QuadratureOptions& opts) {
    const double w = opts.endpoint_width;
    std::vector<double> cuts{0.0, w, 1.0 - w, 1.0};
    for (double x : interior_breaks) {
        if (x > w && x < 1.0 - w) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> panels;
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
        total.value += p.value;
        total.error += p.error;
        panels.push(p);
    }
    int count = static_cast<int>(panels.size());

    const auto converged = [&] {
        return total.error <= std::max(opts.rel_tol * std::abs(total.value), opts.abs_floor);
    };
    while (!converged() && count < opts.max_intervals) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;  // panel at machine resolution
        panels.pop();
        const Panel left = gauss_kronrod(f, worst.lo, mid);
        const Panel right = gauss_kronrod(f, mid, worst.hi);
        total.value += left.value + right.value - worst.value;
        total.error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }

    // Re-sum to shed the drift of the running updates.
    total.value = 0.0;
    total.error = 0.0;
    while (!panels.empty()) {
        total.value += panels.top().value;
        total.error += panels.top().error;
        panels.pop();
    }
    total.evaluations = 15 * (2 * count - static_cast<int>(cuts.size()) + 1);
    if (!std::isfinite(total.value) || !converged()) {
        std::ostringstream msg;
        msg << "quadrature did not converge: value " << total.value << ", error estimate "
            << total.error << " after " << count << " panels";
        throw QuadratureError(msg.str());
    }
    return total;
}

}  // namespace wpcn
