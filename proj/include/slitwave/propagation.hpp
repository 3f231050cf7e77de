#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "slitwave/aperture.hpp"
#include "slitwave/parallel.hpp"
#include "slitwave/quadrature.hpp"
#include "slitwave/spectrum.hpp"

namespace slitwave {

enum class Method { kirchhoff, angular_spectrum, fresnel, far_field };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct PropagationConfig {
  double source_distance = 1.0;   // a, metres
  double source_amplitude = 1.0;  // A
  Method method = Method::kirchhoff;
  bool rescale_to_unit_mass = true;
  QuadratureBudget budget{};

  void validate() const;
};

/// Aperture Fresnel number W^2 / (lambda y).
double fresnel_number(double extent, const BeamParams& beam, double y);

inline constexpr double far_field_fresnel_limit = 0.05;

/// Smallest y at which the far-field closed form is accepted.
double far_field_threshold(double extent, const BeamParams& beam);

/// Largest k_x step at which the windowed angular-spectrum sum stays free of
/// aliasing at plane y for a boundary field of half-width `half_width`.
double angular_spectrum_max_step(double half_width, const BeamParams& beam, double y);

/// Field by angular-spectrum synthesis. At y > 0 the k_x sum is restricted,
/// per detector point, to a smooth (erf-edged) window around the stationary
/// wavenumbers k (x - x'') / y of the aperture; outside it the integrand has no
/// stationary point and contributes only at the window edges, which the taper
/// suppresses. At y = 0 the whole grid is summed.
ComplexField propagate_angular_spectrum(const MomentumSpectrum& spectrum, const BeamParams& beam,
                                        double y, const Grid1D& xgrid,
                                        Execution exec = default_execution);

/// Fresnel convolution of the boundary field, each constant run integrated
/// with phase-resolved Gauss-Legendre cells.
ComplexField propagate_fresnel(const ComplexField& boundary, const BeamParams& beam, double y,
                               const Grid1D& xgrid, const QuadratureBudget& budget = {},
                               Execution exec = default_execution);

/// Full Fresnel-Kirchhoff integral with obliquity factor (1 + cos chi).
ComplexField propagate_kirchhoff(const ComplexField& boundary, const BeamParams& beam,
                                 const PropagationConfig& config, double y, const Grid1D& xgrid,
                                 Execution exec = default_execution);

/// 1 + cos chi for a wavelet travelling from x'' to x at distance y, dx = x - x''.
double obliquity_factor(double y, double dx);

/// Modulus of the Kirchhoff prefactor, A / (2 lambda a).
double kirchhoff_prefactor_modulus(const BeamParams& beam, const PropagationConfig& config);

/// Closed far-field form sqrt(k/y) e^{-i pi/4} e^{i k x^2 / 2y} c(k x / y).
ComplexField far_field_wavefunction(const MomentumSpectrum& spectrum, const BeamParams& beam,
                                    double y, const Grid1D& xgrid,
                                    Execution exec = default_execution);

/// psi(x, t) = phi(x, v t).
ComplexField transverse_psi(const MomentumSpectrum& spectrum, const BeamParams& beam, double t,
                            const Grid1D& xgrid, Execution exec = default_execution);

/// Interpolate c at an arbitrary k_x (10-point Lagrange on the demodulated
/// samples c(k) e^{i k x_c}).
complex interpolate_amplitude(const MomentumSpectrum& spectrum, double kx);

/// Recover c(k_x) from a propagated field by the inverse transform
/// e^{i k^2 y / 2k} (2 pi)^{-1/2} \int phi(x, y) e^{-i k x} dx, windowed around
/// the stationary region like the forward synthesis. `support_*` is the extent
/// of the aperture that generated the field.
std::vector<complex> recover_amplitude(const ComplexField& field, const BeamParams& beam,
                                       double support_left, double support_right,
                                       std::span<const double> kx);

struct XGridOptions {
  /// Momentum tail mass allowed outside the window (via x = k_x y / k).
  double tail_target = 2e-4;
  /// Samples per smallest resolved feature.
  double oversample = 8.0;
  /// Resolve the cross-slit beat of period lambda y / W at every distance.
  /// Off, near-field grids follow the Fresnel zone sqrt(lambda y) and leave
  /// the weak beat between the slits' diffraction tails under-sampled.
  bool resolve_fringes = false;
};

/// Symmetric detector grid for plane y.
Grid1D auto_x_grid(const ApertureSpec& aperture, const BeamParams& beam, double y,
                   const XGridOptions& options = {});

/// k_x grid able to feed the angular-spectrum and far-field evaluators on
/// `xgrid` at every plane in `ys`: fine enough for every window, wide enough
/// for the farthest detector point (the full tail-target span only if some
/// plane is y = 0).
Grid1D spectrum_grid_for_planes(const ApertureSpec& aperture, const BeamParams& beam,
                                std::span<const double> ys, std::span<const Grid1D> xgrids,
                                const MomentumGridOptions& options = {});

}  // namespace slitwave
