#include "slitwave/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slitwave/error.hpp"
#include "slitwave/quadrature.hpp"

namespace slitwave {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) fail_validation("arrival time t must be positive");
}

double integrate_total(const std::vector<double>& total, const Grid1D& grid) {
  return integrate_smooth(total, grid, grid.start(), grid.back());
}

struct Segment {
  double left;
  double right;
  double weight;  // launch density on the segment
};

// One component per slit; total over the passing ones.
ArrivalDensity slit_components(const MomentumSpectrum& spectrum, const std::vector<std::vector<Segment>>& parts,
                               std::vector<bool> passing, const BeamParams& beam, double t,
                               const Grid1D& xgrid, Execution exec) {
  require_positive_time(t);
  const MomentumMass mass(spectrum);
  const double scale = beam.mass() / (hbar * t);  // k_x per metre of displacement
  const std::size_t n = parts.size();

  ArrivalDensity out{xgrid, std::vector<double>(xgrid.count(), 0.0),
                     std::vector<std::vector<double>>(n, std::vector<double>(xgrid.count(), 0.0)),
                     std::move(passing), t, 0.0};
  // Range checks throw, so probe the grid ends serially first.
  for (const auto& segs : parts)
    for (const auto& seg : segs)
      for (double x : {xgrid.start(), xgrid.back()}) mass(scale * (x - seg.right), scale * (x - seg.left));

  for_each_point(xgrid.count(), exec, [&](std::size_t i) {
    const double x = xgrid.at(i);
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double p = 0.0;
      for (const auto& seg : parts[c]) p += seg.weight * mass(scale * (x - seg.right), scale * (x - seg.left));
      out.per_slit[c][i] = p;
      if (out.passing_mask[c]) total += p;
    }
    out.total[i] = total;
  });
  out.mass = integrate_total(out.total, xgrid);
  return out;
}

std::vector<std::vector<Segment>> slit_segments(const ApertureSpec& aperture) {
  const double density = 1.0 / aperture.total_width();
  std::vector<std::vector<Segment>> parts;
  for (const auto& s : aperture.slits()) parts.push_back({{s.x_left, s.x_right, density}});
  return parts;
}

}  // namespace

XGridOptions arrival_grid_options() {
  XGridOptions options;
  options.tail_target = MomentumGridOptions{}.tail_target;
  options.resolve_fringes = true;
  return options;
}

double passing_fraction(const ApertureSpec& aperture, double diameter) {
  const auto mask = aperture.passing_mask(diameter);
  double passing = 0.0;
  for (std::size_t i = 0; i < aperture.size(); ++i)
    if (mask[i]) passing += aperture[i].width();
  return passing / aperture.total_width();
}

ArrivalDensity arrival_density_general(const MomentumSpectrum& spectrum, const ComplexField& boundary,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       Execution exec) {
  if (boundary.provenance != Provenance::boundary)
    fail_validation("arrival_density_general needs a boundary field");
  const double norm = boundary.mass();
  if (std::abs(norm - 1.0) > 1e-6)
    fail_validation("unnormalized-boundary: boundary mass is " + std::to_string(norm));

  // Each open cell launches |phi_j|^2 over its own interval; contiguous open
  // cells form one reported component.
  const auto& g = boundary.grid;
  const double half = 0.5 * g.step();
  std::vector<std::vector<Segment>> parts;
  bool in_run = false;
  for (std::size_t j = 0; j < g.count(); ++j) {
    const double rho = std::norm(boundary.values[j]);
    if (rho == 0.0) {
      in_run = false;
      continue;
    }
    if (!in_run) parts.emplace_back();
    in_run = true;
    parts.back().push_back({g.at(j) - half, g.at(j) + half, rho});
  }
  std::vector<bool> passing(parts.size(), true);
  return slit_components(spectrum, parts, std::move(passing), beam, t, xgrid, exec);
}

ArrivalDensity arrival_density_blocked(const MomentumSpectrum& spectrum, const ApertureSpec& aperture,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       bool renormalize, Execution exec) {
  auto mask = aperture.passing_mask(beam.diameter());
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
    fail_validation("all-slits-blocked: particle diameter " + std::to_string(beam.diameter()) +
                    " m is at least as wide as every slit");
  auto out = slit_components(spectrum, slit_segments(aperture), std::move(mask), beam, t, xgrid, exec);
  if (renormalize) {
    const double fraction = passing_fraction(aperture, beam.diameter());
    for (auto& v : out.total) v /= fraction;
    for (auto& comp : out.per_slit)
      for (auto& v : comp) v /= fraction;
    out.mass = integrate_total(out.total, xgrid);
    out.renormalized = true;
  }
  return out;
}

ArrivalDensity arrival_density_slitsum(const MomentumSpectrum& spectrum, const ApertureSpec& aperture,
                                       const BeamParams& beam, double t, const Grid1D& xgrid,
                                       Execution exec) {
  return arrival_density_blocked(spectrum, aperture, beam.with_diameter(0.0), t, xgrid, false, exec);
}

}  // namespace slitwave
