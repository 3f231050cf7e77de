#pragma once

#include <vector>

#include "slitwave/aperture.hpp"
#include "slitwave/parallel.hpp"
#include "slitwave/propagation.hpp"
#include "slitwave/spectrum.hpp"

namespace slitwave {

/// Detector-grid options for arrival densities: the grid reaches out to the
/// displacement of the spectrum grid's own tail target, so the mass lost off
/// the grid stays below 1e-4, and resolves the d-fringes of |c|^2 mapped to x
/// at every time.
XGridOptions arrival_grid_options();

/// Trajectory-based arrival density at time t. `per_slit` holds every slit's
/// component (blocked ones included, for reporting); `total` sums only the
/// passing ones, in slit order.
struct ArrivalDensity {
  Grid1D grid;
  std::vector<double> total;
  std::vector<std::vector<double>> per_slit;
  std::vector<bool> passing_mask;
  double time = 0.0;
  double mass = 0.0;
  /// Case b keeps the momentum distribution of the full aperture.
  bool full_aperture_spectrum = true;
  bool renormalized = false;
};

/// Convolution of |c|^2, mapped to x via u = hbar k_x t / m, with the sampled
/// launch density |phi(x'', 0)|^2. Works for any piecewise-constant boundary
/// field; contiguous open cells are reported as components.
ArrivalDensity arrival_density_general(const MomentumSpectrum& spectrum, const ComplexField& boundary,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       Execution exec = default_execution);

/// Per-slit closed form for constant-amplitude apertures:
/// P_i(x, t) = (1 / sum delta) \int |c|^2 dk_x over [m (x - x_r) / hbar t, m (x - x_l) / hbar t].
ArrivalDensity arrival_density_slitsum(const MomentumSpectrum& spectrum, const ApertureSpec& aperture,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       Execution exec = default_execution);

/// Case b: only slits wider than the particle diameter contribute, with the
/// spectrum of the full aperture. `renormalize` divides by the passing width
/// fraction.
ArrivalDensity arrival_density_blocked(const MomentumSpectrum& spectrum, const ApertureSpec& aperture,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       bool renormalize = false, Execution exec = default_execution);

/// Sum of the passing widths over the total width.
double passing_fraction(const ApertureSpec& aperture, double diameter);

}  // namespace slitwave
