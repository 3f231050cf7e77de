#pragma once

#include <span>
#include <vector>

#include "slitwave/grid.hpp"

namespace slitwave {

/// Profile divided by its trapezoid mass over the grid.
std::vector<double> normalized(std::span<const double> profile, const Grid1D& grid);

/// \int |a - b| dx over the grid.
double l1_distance(std::span<const double> a, std::span<const double> b, const Grid1D& grid);

double linf_distance(std::span<const double> a, std::span<const double> b);

/// max_i |a_i - b_i| / max(|b_i|, floor * max_j |b_j|). The floor keeps exact
/// zeros of the reference from dominating.
double max_relative_difference(std::span<const double> a, std::span<const double> b, double floor);

/// Local maxima of `values` with abscissae refined by a parabola through the
/// three neighbouring samples. Only maxima above `min_height` times the
/// largest sample are kept.
std::vector<double> find_peaks(std::span<const double> values, const Grid1D& grid, double min_height);

/// Median distance between consecutive peaks inside [lo, hi].
double median_peak_spacing(std::span<const double> values, const Grid1D& grid, double lo, double hi,
                           double min_height = 0.0);

}  // namespace slitwave
