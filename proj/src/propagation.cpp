#include "slitwave/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slitwave/error.hpp"

namespace slitwave {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
const complex minus_i_quarter = std::polar(1.0, -0.25 * pi);

// Taper geometry around the stationary band, in units of s = sqrt(k / y),
// the width of one stationary-phase zone in k_x.
constexpr double flat_margin = 6.0;
constexpr double edge_sigma = 1.5;
constexpr double edge_offset = 3.0;   // erf centres sit 3 sigma past the flat band
constexpr double edge_reach = 9.0;    // window support ends 9 sigma past the flat band
constexpr double sampling_safety = 1.25;

// Smooth box: ~1 on [a, b], erf-edged with width sigma, support [a - 9s, b + 9s].
double taper(double k, double a, double b, double sigma) {
  return 0.5 * (std::erf((k - (a - edge_offset * sigma)) / sigma) -
                std::erf((k - (b + edge_offset * sigma)) / sigma));
}

struct Run {
  double left;
  double right;
  complex value;
};

// Maximal runs of identical nonzero cell values, as exact intervals.
std::vector<Run> constant_runs(const ComplexField& boundary) {
  if (boundary.provenance != Provenance::boundary)
    fail_validation("propagator needs a boundary field");
  std::vector<Run> runs;
  const auto& g = boundary.grid;
  const double half = 0.5 * g.step();
  for (std::size_t i = 0; i < g.count(); ++i) {
    const complex v = boundary.values[i];
    if (v == complex{}) continue;
    const double left = g.at(i) - half;
    const double right = g.at(i) + half;
    if (!runs.empty() && runs.back().value == v && std::abs(runs.back().right - left) < 1e-6 * g.step())
      runs.back().right = right;
    else
      runs.push_back({left, right, v});
  }
  if (runs.empty()) fail_validation("boundary field is identically zero");
  return runs;
}

double support_center(const std::vector<Run>& runs) {
  return 0.5 * (runs.front().left + runs.back().right);
}

void require_positive_plane(double y) {
  if (!(y > 0.0) || !std::isfinite(y)) fail_validation("plane y must be positive and finite");
}

double grid_mass(const std::vector<complex>& values, const Grid1D& grid) {
  std::vector<double> rho(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rho[i] = std::norm(values[i]);
  return integrate_smooth(rho, grid, grid.start(), grid.back());
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kirchhoff: return "kirchhoff";
    case Method::angular_spectrum: return "angular-spectrum";
    case Method::fresnel: return "fresnel";
    case Method::far_field: return "far-field";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "kirchhoff") return Method::kirchhoff;
  if (name == "angular-spectrum") return Method::angular_spectrum;
  if (name == "fresnel") return Method::fresnel;
  if (name == "far-field") return Method::far_field;
  fail_validation("unknown propagation method '" + std::string(name) + "'");
}

void PropagationConfig::validate() const {
  if (method == Method::kirchhoff && !(source_distance > 0.0))
    fail_validation("source_distance must be positive for the kirchhoff method");
  budget.validate();
}

double fresnel_number(double extent, const BeamParams& beam, double y) {
  return extent * extent / (beam.wavelength() * y);
}

double far_field_threshold(double extent, const BeamParams& beam) {
  return extent * extent / (far_field_fresnel_limit * beam.wavelength());
}

double angular_spectrum_max_step(double half_width, const BeamParams& beam, double y) {
  require_positive_plane(y);
  const double k = beam.k();
  const double s = std::sqrt(k / y);
  const double reach = k * half_width / y + (flat_margin + edge_reach * edge_sigma) * s;
  const double bandwidth = half_width + reach * y / k + 6.0 / (edge_sigma * s);
  return 2.0 * pi / (sampling_safety * bandwidth);
}

ComplexField propagate_angular_spectrum(const MomentumSpectrum& spectrum, const BeamParams& beam,
                                        double y, const Grid1D& xgrid, Execution exec) {
  if (!(y >= 0.0) || !std::isfinite(y)) fail_validation("plane y must be non-negative");
  const Grid1D& kg = spectrum.grid;
  const double dk = kg.step();
  const double k0 = beam.k();
  const double xc = spectrum.support_center();
  const double half = spectrum.support_half_width();
  ComplexField out{xgrid, std::vector<complex>(xgrid.count()), y, Provenance::angular_spectrum};

  if (y == 0.0) {
    for_each_point(xgrid.count(), exec, [&](std::size_t i) {
      const double x = xgrid.at(i);
      // e^{i k x} along the uniform k grid by recurrence, re-anchored every 1024 nodes.
      const complex turn = std::polar(1.0, dk * x);
      complex acc{};
      complex e{};
      for (std::size_t m = 0; m < kg.count(); ++m) {
        e = (m % 1024 == 0) ? std::polar(1.0, kg.at(m) * x) : e * turn;
        const double w = (m == 0 || m + 1 == kg.count()) ? 0.5 : 1.0;
        acc += w * spectrum.values[m] * e;
      }
      out.values[i] = inv_sqrt_2pi * dk * acc;
    });
    return out;
  }

  const double s = std::sqrt(k0 / y);
  const double band = k0 * half / y;
  const double k_first = kg.start();
  const double k_last = kg.back();
  // Edge width shrinks when the window has to be clipped to a short grid.
  const double sigma = std::min(edge_sigma * s, 0.02 * kg.span());
  const double reach = (edge_offset + 6.0) * sigma;

  for (std::size_t i = 0; i < xgrid.count(); ++i) {
    const double kc = k0 * (xgrid.at(i) - xc) / y;
    if (kc - band < k_first || kc + band > k_last)
      fail_budget("spectrum-tail-unresolved: detector point x = " + std::to_string(xgrid.at(i)) +
                  " needs k_x beyond the spectrum grid at y = " + std::to_string(y));
  }
  // Worst-case window half-extent over the detector grid.
  const double extent = band + flat_margin * s + reach;
  const double bandwidth = half + extent * y / k0 + 6.0 / sigma;
  const double max_step = 2.0 * pi / (sampling_safety * bandwidth);
  if (dk > max_step)
    fail_budget("spectrum-tail-unresolved: k_x step " + std::to_string(dk) + " too coarse for y = " +
                std::to_string(y) + " (need <= " + std::to_string(max_step) + ")");
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(max_step / dk)));
  const double curvature = y / (2.0 * k0);

  for_each_point(xgrid.count(), exec, [&](std::size_t i) {
    const double x = xgrid.at(i);
    const double kc = k0 * (x - xc) / y;
    const double a = std::max(kc - band - flat_margin * s, k_first + reach);
    const double b = std::min(kc + band + flat_margin * s, k_last - reach);
    const double lo = std::max(a - reach, k_first);
    const double hi = std::min(b + reach, k_last);
    auto m0 = static_cast<std::size_t>(std::ceil((lo - k_first) / dk));
    m0 -= m0 % stride;
    // The phase q xc - q^2 y / 2k is quadratic along the grid, so the phasor
    // advances by a second-order recurrence, re-anchored every 64 nodes.
    const double h = dk * static_cast<double>(stride);
    const auto phase = [&](double q) { return q * xc - q * q * curvature; };
    const complex turn = std::polar(1.0, -2.0 * curvature * h * h);
    // erf saturates to exactly 1 six sigma in, so the flat part skips it.
    const double flat_lo = a + edge_offset * sigma, flat_hi = b - edge_offset * sigma;
    complex acc{};
    complex e{}, step{};
    std::size_t j = 0;
    for (std::size_t m = m0; m < kg.count(); m += stride, ++j) {
      const double k = kg.at(m);
      if (k > hi) break;
      const double q = k - kc;
      if (j % 64 == 0) {
        e = std::polar(1.0, phase(q));
        step = std::polar(1.0, phase(q + h) - phase(q));
      } else {
        e *= step;
        step *= turn;
      }
      const double w = (k >= flat_lo && k <= flat_hi) ? 1.0 : taper(k, a, b, sigma);
      acc += w * spectrum.values[m] * e;
    }
    const double base_phase = 0.5 * k0 / y * (x - xc) * (x + xc);
    out.values[i] = inv_sqrt_2pi * dk * static_cast<double>(stride) * std::polar(1.0, base_phase) * acc;
  });
  return out;
}

ComplexField propagate_fresnel(const ComplexField& boundary, const BeamParams& beam, double y,
                               const Grid1D& xgrid, const QuadratureBudget& budget, Execution exec) {
  require_positive_plane(y);
  budget.validate();
  const auto runs = constant_runs(boundary);
  const double k0 = beam.k();
  const double xc = support_center(runs);
  const double scale = k0 / (2.0 * y);
  const complex prefactor = minus_i_quarter * std::sqrt(k0 / (2.0 * pi * y));
  ComplexField out{xgrid, std::vector<complex>(xgrid.count()), y, Provenance::fresnel};

  for_each_point(xgrid.count(), exec, [&](std::size_t i) {
    // (x - x'')^2 = X^2 - 2 X u + u^2 with X = x - xc, u = x'' - xc; the X^2
    // part is a common phase taken out of the integral.
    const double X = xgrid.at(i) - xc;
    complex acc{};
    for (const auto& run : runs)
      acc += run.value * integrate_chirp(scale, -2.0 * scale * X, run.left - xc, run.right - xc, budget);
    out.values[i] = prefactor * std::polar(1.0, scale * X * X) * acc;
  });
  return out;
}

// Plain sqrt: detector offsets never come near overflow, and hypot costs several
// times as much in the Kirchhoff inner loop.
double obliquity_factor(double y, double dx) { return 1.0 + y / std::sqrt(y * y + dx * dx); }

double kirchhoff_prefactor_modulus(const BeamParams& beam, const PropagationConfig& config) {
  return config.source_amplitude / (2.0 * beam.wavelength() * config.source_distance);
}

ComplexField propagate_kirchhoff(const ComplexField& boundary, const BeamParams& beam,
                                 const PropagationConfig& config, double y, const Grid1D& xgrid,
                                 Execution exec) {
  require_positive_plane(y);
  if (config.method != Method::kirchhoff) fail_validation("propagate_kirchhoff needs method = kirchhoff");
  config.validate();
  const auto runs = constant_runs(boundary);
  const double k0 = beam.k();
  const double a = config.source_distance;
  const complex prefactor = complex{0.0, -config.source_amplitude / (2.0 * beam.wavelength())} *
                            std::polar(1.0 / a, std::fmod(k0 * a, 2.0 * pi));
  ComplexField out{xgrid, std::vector<complex>(xgrid.count()), y, Provenance::kirchhoff};

  for_each_point(xgrid.count(), exec, [&](std::size_t i) {
    const double x = xgrid.at(i);
    complex acc{};
    for (const auto& run : runs) {
      // e^{iks} = e^{iky} e^{ik(s - y)}; the e^{iky} factor is carried symbolically.
      const auto integrand = [&](double xs) {
        const double dx = x - xs;
        const double s = std::sqrt(y * y + dx * dx);
        const double excess = dx * dx / (s + y);
        return std::polar((1.0 + y / s) / s, k0 * excess);
      };
      const auto rate = [&](double xs) {
        const double dx = x - xs;
        return k0 * std::abs(dx) / std::sqrt(y * y + dx * dx);
      };
      acc += run.value * integrate_oscillatory(integrand, rate, run.left, run.right, config.budget);
    }
    out.values[i] = prefactor * acc;
  });

  if (config.rescale_to_unit_mass) {
    const double mass = grid_mass(out.values, xgrid);
    if (!(mass > 0.0)) fail_budget("kirchhoff field vanished on the detector grid");
    const double factor = 1.0 / std::sqrt(mass);
    for (auto& v : out.values) v *= factor;
  }
  return out;
}

// Lagrange nodes per interpolation. The demodulated amplitude is band-limited to
// W/2, so on grids with dk = 2 pi / (8 W) ten nodes leave ~1e-7 of the peak.
constexpr int interpolation_points = 10;

complex interpolate_amplitude(const MomentumSpectrum& spectrum, double kx) {
  const Grid1D& g = spectrum.grid;
  const double s = (kx - g.start()) / g.step();
  const double xc = spectrum.support_center();
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-12 && nearest >= 0.0 && nearest <= static_cast<double>(g.count() - 1))
    return spectrum.values[static_cast<std::size_t>(nearest)];
  constexpr int lo_off = interpolation_points / 2 - 1;  // nodes left - lo_off .. left + lo_off + 1
  const auto left = static_cast<long long>(std::floor(s));
  if (left < lo_off || left + lo_off + 1 >= static_cast<long long>(g.count()))
    fail_budget("spectrum-tail-unresolved: k_x = " + std::to_string(kx) +
                " lies outside the interpolable spectrum grid");
  const double t = s - static_cast<double>(left);
  complex acc{};
  for (int j = -lo_off; j <= lo_off + 1; ++j) {
    double w = 1.0;
    for (int m = -lo_off; m <= lo_off + 1; ++m)
      if (m != j) w *= (t - m) / (j - m);
    const auto idx = static_cast<std::size_t>(left + j);
    acc += w * spectrum.values[idx] * std::polar(1.0, g.at(idx) * xc);
  }
  return acc * std::polar(1.0, -kx * xc);
}

ComplexField far_field_wavefunction(const MomentumSpectrum& spectrum, const BeamParams& beam,
                                    double y, const Grid1D& xgrid, Execution exec) {
  require_positive_plane(y);
  const double extent = spectrum.support_right - spectrum.support_left;
  const double threshold = far_field_threshold(extent, beam);
  if (y < threshold)
    fail_validation("not-in-far-field: y = " + std::to_string(y) + " m is below the far-field threshold " +
                    std::to_string(threshold) + " m (Fresnel number " +
                    std::to_string(fresnel_number(extent, beam, y)) + ")");
  const double k0 = beam.k();
  const double amplitude = std::sqrt(k0 / y);
  ComplexField out{xgrid, std::vector<complex>(xgrid.count()), y, Provenance::far_field};
  // Reject out-of-grid points before entering the parallel region.
  interpolate_amplitude(spectrum, k0 * xgrid.start() / y);
  interpolate_amplitude(spectrum, k0 * xgrid.back() / y);
  for_each_point(xgrid.count(), exec, [&](std::size_t i) {
    const double x = xgrid.at(i);
    out.values[i] = amplitude * minus_i_quarter * std::polar(1.0, 0.5 * k0 * x * x / y) *
                    interpolate_amplitude(spectrum, k0 * x / y);
  });
  return out;
}

ComplexField transverse_psi(const MomentumSpectrum& spectrum, const BeamParams& beam, double t,
                            const Grid1D& xgrid, Execution exec) {
  if (!(t >= 0.0)) fail_validation("time t must be non-negative");
  return propagate_angular_spectrum(spectrum, beam, beam.velocity() * t, xgrid, exec);
}

std::vector<complex> recover_amplitude(const ComplexField& field, const BeamParams& beam,
                                       double support_left, double support_right,
                                       std::span<const double> kx) {
  const double y = field.y_plane;
  require_positive_plane(y);
  const Grid1D& g = field.grid;
  const double k0 = beam.k();
  const double xc = 0.5 * (support_left + support_right);
  const double half = 0.5 * (support_right - support_left);
  const double s = std::sqrt(y / k0);  // stationary-phase zone width in x
  const double sigma = edge_sigma * s;
  const double reach = (edge_offset + 6.0) * sigma;
  const double extent = half + flat_margin * s + reach;
  const double bandwidth = k0 * (half + extent) / y + 6.0 / sigma;
  if (g.step() > 2.0 * pi / (sampling_safety * bandwidth))
    fail_budget("field grid too coarse to invert at y = " + std::to_string(y));

  std::vector<complex> out(kx.size());
  for (std::size_t n = 0; n < kx.size(); ++n) {
    const double k = kx[n];
    const double center = xc + k * y / k0;
    const double a = center - half - flat_margin * s;
    const double b = center + half + flat_margin * s;
    if (a - reach < g.start() || b + reach > g.back())
      fail_budget("field grid does not cover the stationary region for k_x = " + std::to_string(k));
    complex acc{};
    for (std::size_t i = 0; i < g.count(); ++i) {
      const double x = g.at(i);
      if (x < a - reach || x > b + reach) continue;
      acc += taper(x, a, b, sigma) * field.values[i] * std::polar(1.0, -k * x);
    }
    out[n] = std::polar(inv_sqrt_2pi * g.step(), k * k * y / (2.0 * k0)) * acc;
  }
  return out;
}

Grid1D auto_x_grid(const ApertureSpec& aperture, const BeamParams& beam, double y,
                   const XGridOptions& options) {
  require_positive_plane(y);
  const double k0 = beam.k();
  const double edge = std::max(std::abs(aperture.left_edge()), std::abs(aperture.right_edge()));
  const double half_width = edge + k_max_for_tail(aperture, options.tail_target) * y / k0;
  const double fresnel_zone = std::sqrt(beam.wavelength() * y);
  const double fringe = 2.0 * pi * y / (k0 * aperture.extent());
  const double step = (options.resolve_fringes ? fringe : std::max(fresnel_zone, fringe)) / options.oversample;
  return Grid1D::symmetric(half_width, step);
}

Grid1D spectrum_grid_for_planes(const ApertureSpec& aperture, const BeamParams& beam,
                                std::span<const double> ys, std::span<const Grid1D> xgrids,
                                const MomentumGridOptions& options) {
  if (ys.size() != xgrids.size()) fail_validation("one detector grid per plane is required");
  const Grid1D base = auto_momentum_grid(aperture, options);
  double step = base.step();
  // Only the y = 0 synthesis sums the whole spectrum; planes y > 0 need the
  // wavenumbers their stationary windows reach.
  double k_max = 0.0;
  const double k0 = beam.k();
  const double half = 0.5 * aperture.extent();
  const double xc = aperture.center();
  for (std::size_t p = 0; p < ys.size(); ++p) {
    const double y = ys[p];
    if (y == 0.0) {
      k_max = std::max(k_max, base.back());
      continue;
    }
    step = std::min(step, angular_spectrum_max_step(half, beam, y));
    const double x_far = std::max(std::abs(xgrids[p].start() - xc), std::abs(xgrids[p].back() - xc));
    const double s = std::sqrt(k0 / y);
    k_max = std::max(k_max, k0 * (x_far + half) / y + (flat_margin + 2.0 * edge_reach * edge_sigma) * s);
  }
  return Grid1D::symmetric(k_max, step);
}

}  // namespace slitwave
