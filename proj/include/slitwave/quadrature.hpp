#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "slitwave/grid.hpp"

namespace slitwave {

struct QuadratureBudget {
  std::size_t max_nodes = 20'000'000;
  double target_phase_step = 0.7853981633974483;  // pi/4
  int rule_order = 8;

  void validate() const;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (cached per order).
const GaussRule& gauss_legendre(int order);

/// Integrate an oscillatory integrand over [lo, hi]. The interval is cut into
/// cells whose phase span (phase_rate times cell width, with the rate taken as
/// the larger of its endpoint values) stays below budget.target_phase_step;
/// each cell gets a fixed-order Gauss-Legendre rule. phase_rate must attain its
/// maximum over any sub-interval at one of the endpoints (true for |linear| and
/// other convex rates). Cells and nodes are summed left to right.
std::complex<double> integrate_oscillatory(
    const std::function<std::complex<double>(double)>& integrand,
    const std::function<double(double)>& phase_rate, double lo, double hi,
    const QuadratureBudget& budget = {});

/// \int_lo^hi e^{i (a u^2 + b u)} du under the same cell rule as
/// integrate_oscillatory. The interval is split at the stationary point and
/// into short blocks of uniform cells; along each row of equal-offset nodes the
/// phasor is advanced by the exact second-order recurrence of a quadratic
/// phase, so only a handful of sines and cosines are taken per block.
std::complex<double> integrate_chirp(double a, double b, double lo, double hi,
                                     const QuadratureBudget& budget = {});

/// Trapezoid integral of sampled data over [lo, hi] with linear interpolation
/// inside the two end cells. Limits must lie within the grid span.
double integrate_smooth(std::span<const double> samples, const Grid1D& grid, double lo, double hi);

/// Prefix-sum form of integrate_smooth for many queries over the same samples.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::vector<double> samples, const Grid1D& grid);

  /// Integral from grid.start() to x, x clamped into the grid span.
  double up_to(double x) const;
  double between(double lo, double hi) const { return up_to(hi) - up_to(lo); }
  double total() const { return prefix_.back(); }

  const Grid1D& grid() const noexcept { return grid_; }

 private:
  std::vector<double> samples_;
  std::vector<double> prefix_;
  Grid1D grid_;
};

}  // namespace slitwave
