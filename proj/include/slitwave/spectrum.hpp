#pragma once

#include <string_view>
#include <vector>

#include "slitwave/aperture.hpp"
#include "slitwave/grid.hpp"
#include "slitwave/parallel.hpp"
#include "slitwave/quadrature.hpp"

namespace slitwave {

enum class SpectrumSource { analytic_two_slit, numeric_ft };

std::string_view to_string(SpectrumSource s);

/// Transverse-momentum amplitude c(k_x) sampled on a k_x grid, with the
/// extent of the boundary field that generated it.
struct MomentumSpectrum {
  Grid1D grid;
  std::vector<complex> values;
  SpectrumSource source = SpectrumSource::numeric_ft;
  double support_left = 0.0;
  double support_right = 0.0;

  std::vector<double> density() const;
  double support_center() const { return 0.5 * (support_left + support_right); }
  double support_half_width() const { return 0.5 * (support_right - support_left); }
};

/// sin(z)/z, exact at 0.
double sinc(double z);

/// Closed-form two-slit amplitude at one wavenumber; no preconditions, so
/// degenerate geometries (delta2 = 0, d = 0) can be probed.
complex two_slit_amplitude(double kx, double delta1, double delta2, double d);

/// c(k_x) from a sampled boundary field. Every boundary cell is a constant
/// segment whose Fourier integral is taken in closed form.
MomentumSpectrum momentum_amplitude_numeric(const ComplexField& boundary, const Grid1D& kgrid,
                                            Execution exec = default_execution);

MomentumSpectrum momentum_amplitude_analytic(double delta1, double delta2, double d,
                                             const Grid1D& kgrid,
                                             Execution exec = default_execution);

/// Mass of |c|^2 the grid misses on each side, estimated from the 1/k^2
/// envelope of the outermost tenth of the grid.
struct TailEstimate {
  double below = 0.0;
  double above = 0.0;
};

TailEstimate estimate_tail_mass(const MomentumSpectrum& spectrum);

inline constexpr double default_tail_tolerance = 1e-4;

/// Repeated integrals of |c|^2 over k_x intervals. Limits are clamped to the
/// grid span; clamping a side whose estimated missing tail exceeds the
/// tolerance is an error (the truncation budget is violated).
class MomentumMass {
 public:
  explicit MomentumMass(const MomentumSpectrum& spectrum,
                        double tail_tolerance = default_tail_tolerance);

  double operator()(double k_lo, double k_hi) const;
  double total() const { return cumulative_.total(); }
  const TailEstimate& tail() const noexcept { return tail_; }

 private:
  CumulativeIntegral cumulative_;
  TailEstimate tail_;
  double tolerance_;
};

double momentum_mass(const MomentumSpectrum& spectrum, double k_lo, double k_hi,
                     double tail_tolerance = default_tail_tolerance);

/// Two-sided |c|^2 mass beyond |k_x| > k_max predicted by the 1/k^2 envelope
/// (n slits contribute 2n edges of unit average weight).
double envelope_tail_mass(const ApertureSpec& aperture, double k_max);

/// Smallest k_max whose envelope tail mass is at most `tail`.
double k_max_for_tail(const ApertureSpec& aperture, double tail);

struct MomentumGridOptions {
  double tail_target = 5e-5;
  /// Samples per 2 pi / W, W the outermost edge span. Must exceed 1 for the
  /// trapezoid rule to integrate |c|^2 without aliasing.
  double oversample = 8.0;
};

/// Symmetric k_x grid with 0 as a node; span from the tail target but never
/// below 200 * 2 pi / (narrowest slit).
Grid1D auto_momentum_grid(const ApertureSpec& aperture, const MomentumGridOptions& options = {});

}  // namespace slitwave
