#include "slitwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slitwave/error.hpp"

namespace slitwave {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

double sinc_series(double z) {
  const double z2 = z * z;
  return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
}

struct OpenRun {
  std::size_t first;
  std::size_t last;  // inclusive
};

std::vector<OpenRun> open_runs(const std::vector<complex>& values) {
  std::vector<OpenRun> runs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == complex{}) continue;
    if (!runs.empty() && runs.back().last + 1 == i)
      runs.back().last = i;
    else
      runs.push_back({i, i});
  }
  return runs;
}

}  // namespace

std::string_view to_string(SpectrumSource s) {
  return s == SpectrumSource::analytic_two_slit ? "analytic-two-slit" : "numeric-ft";
}

std::vector<double> MomentumSpectrum::density() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](complex v) { return std::norm(v); });
  return out;
}

double sinc(double z) {
  if (std::abs(z) < 1e-4) return sinc_series(z);
  return std::sin(z) / z;
}

complex two_slit_amplitude(double kx, double delta1, double delta2, double d) {
  const double total = delta1 + delta2;
  const bool series = std::abs(kx * std::max(delta1, delta2)) < 1e-4;
  const double z1 = 0.5 * kx * delta1;
  const double z2 = 0.5 * kx * delta2;
  const double s1 = series ? sinc_series(z1) : (z1 == 0.0 ? 1.0 : std::sin(z1) / z1);
  const double s2 = series ? sinc_series(z2) : (z2 == 0.0 ? 1.0 : std::sin(z2) / z2);
  // k d / 2 reaches 1e5 rad on wide grids; extended precision keeps the
  // relative phase of the two slits accurate where their terms cancel.
  const long double half = 0.5L * static_cast<long double>(kx) * static_cast<long double>(d);
  const auto c = static_cast<double>(std::cos(half));
  const auto s = static_cast<double>(std::sin(half));
  const complex sum = delta1 * s1 * complex{c, s} + delta2 * s2 * complex{c, -s};
  return sum / std::sqrt(2.0 * pi * total);
}

MomentumSpectrum momentum_amplitude_numeric(const ComplexField& boundary, const Grid1D& kgrid,
                                            Execution exec) {
  if (boundary.provenance != Provenance::boundary)
    fail_validation("momentum_amplitude_numeric needs a boundary field");
  const double mass = boundary.mass();
  if (std::abs(mass - 1.0) > 1e-6)
    fail_validation("unnormalized-boundary: boundary mass is " + std::to_string(mass));

  const auto runs = open_runs(boundary.values);
  if (runs.empty()) fail_validation("unnormalized-boundary: boundary field is identically zero");
  const Grid1D& xg = boundary.grid;
  const double dx = xg.step();

  MomentumSpectrum out{kgrid, std::vector<complex>(kgrid.count()), SpectrumSource::numeric_ft,
                       xg.at(runs.front().first) - 0.5 * dx, xg.at(runs.back().last) + 0.5 * dx};
  for_each_point(kgrid.count(), exec, [&](std::size_t m) {
    const double k = kgrid.at(m);
    // Integral of e^{-ikx} over one cell centred at x_j: e^{-ikx_j} dx sinc(k dx/2).
    const double cell = dx * sinc(0.5 * k * dx);
    const complex rotate = std::polar(1.0, -k * dx);
    complex acc{};
    for (const auto& run : runs) {
      // Phases are taken relative to the run centre so the large common phase
      // k x_centre is rounded once, not per cell.
      const double offset = -0.5 * static_cast<double>(run.last - run.first) * dx;
      const long double centre = static_cast<long double>(xg.start()) +
                                 (static_cast<long double>(run.first) - offset / dx) * dx;
      complex phasor = std::polar(1.0, -k * offset);
      complex run_sum{};
      for (std::size_t j = run.first; j <= run.last; ++j) {
        run_sum += boundary.values[j] * phasor;
        phasor *= rotate;
      }
      const long double phase = -static_cast<long double>(k) * centre;
      acc += complex{static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))} * run_sum;
    }
    out.values[m] = inv_sqrt_2pi * cell * acc;
  });
  return out;
}

MomentumSpectrum momentum_amplitude_analytic(double delta1, double delta2, double d,
                                             const Grid1D& kgrid, Execution exec) {
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) fail_validation("slit widths must be positive");
  if (!(d > 0.5 * (delta1 + delta2)))
    fail_validation("overlapping-slits: separation d must exceed (delta1 + delta2)/2");
  MomentumSpectrum out{kgrid, std::vector<complex>(kgrid.count()),
                       SpectrumSource::analytic_two_slit, 0.5 * (-d - delta1), 0.5 * (d + delta2)};
  for_each_point(kgrid.count(), exec, [&](std::size_t m) {
    out.values[m] = two_slit_amplitude(kgrid.at(m), delta1, delta2, d);
  });
  return out;
}

TailEstimate estimate_tail_mass(const MomentumSpectrum& spectrum) {
  const auto& g = spectrum.grid;
  const std::size_t band = std::max<std::size_t>(g.count() / 10, 2);
  auto envelope = [&](std::size_t from, std::size_t to) {
    double sum = 0.0;
    for (std::size_t i = from; i < to; ++i) {
      const double k = g.at(i);
      sum += k * k * std::norm(spectrum.values[i]);
    }
    return sum / static_cast<double>(to - from);
  };
  TailEstimate t;
  const double k_lo = std::abs(g.start());
  const double k_hi = std::abs(g.back());
  // A grid edge at or past zero has no 1/k^2 tail to speak of.
  t.below = g.start() < 0.0 ? envelope(0, band) / k_lo : 1.0;
  t.above = g.back() > 0.0 ? envelope(g.count() - band, g.count()) / k_hi : 1.0;
  return t;
}

MomentumMass::MomentumMass(const MomentumSpectrum& spectrum, double tail_tolerance)
    : cumulative_(spectrum.density(), spectrum.grid),
      tail_(estimate_tail_mass(spectrum)),
      tolerance_(tail_tolerance) {}

double MomentumMass::operator()(double k_lo, double k_hi) const {
  if (k_lo > k_hi) fail_validation("momentum_mass needs k_lo <= k_hi");
  const Grid1D& g = cumulative_.grid();
  if (k_lo < g.start() && tail_.below > tolerance_)
    fail_budget("spectrum-tail-unresolved: limit below the k grid with estimated tail mass " +
                std::to_string(tail_.below));
  if (k_hi > g.back() && tail_.above > tolerance_)
    fail_budget("spectrum-tail-unresolved: limit above the k grid with estimated tail mass " +
                std::to_string(tail_.above));
  if (k_lo == k_hi) return 0.0;
  return cumulative_.between(k_lo, k_hi);
}

double momentum_mass(const MomentumSpectrum& spectrum, double k_lo, double k_hi,
                     double tail_tolerance) {
  return MomentumMass(spectrum, tail_tolerance)(k_lo, k_hi);
}

double envelope_tail_mass(const ApertureSpec& aperture, double k_max) {
  return 2.0 * static_cast<double>(aperture.size()) / (pi * aperture.total_width() * k_max);
}

double k_max_for_tail(const ApertureSpec& aperture, double tail) {
  if (!(tail > 0.0)) fail_validation("tail target must be positive");
  return 2.0 * static_cast<double>(aperture.size()) / (pi * aperture.total_width() * tail);
}

Grid1D auto_momentum_grid(const ApertureSpec& aperture, const MomentumGridOptions& options) {
  if (!(options.oversample > 1.0)) fail_validation("momentum grid oversample must exceed 1");
  const double k_max =
      std::max(200.0 * 2.0 * pi / aperture.min_width(), k_max_for_tail(aperture, options.tail_target));
  const double step = 2.0 * pi / (options.oversample * aperture.extent());
  return Grid1D::symmetric(k_max, step);
}

}  // namespace slitwave
