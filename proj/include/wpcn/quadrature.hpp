#pragma once

#include <functional>
#include <span>

namespace wpcn {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< absolute error estimate
    int evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_floor = 1e-14;
    int max_intervals = 4000;
    /// Width of the end panels [0, w] and [1 - w, 1] split off up front.
    double endpoint_width = 1e-3;
};

/**
 * Globally adaptive Gauss-Kronrod (7/15) over [0, 1]: the panel with the
 * largest |K15 - G7| is bisected until the summed estimate drops below
 * max(rel_tol * |value|, abs_floor). The initial panels are the end panels plus
 * the given interior breakpoints. Nodes are interior, so integrable endpoint
 * singularities are fine.
 *
 * Throws QuadratureError when the panel budget runs out first.
 */
QuadratureResult integrate_unit_interval(const std::function<double(double)>& f,
                                         std::span<const double> interior_breaks = {},
                                         const QuadratureOptions& opts = {});

}  // namespace wpcn
