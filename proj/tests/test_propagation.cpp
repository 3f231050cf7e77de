#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "slitwave/error.hpp"
#include "slitwave/profile.hpp"
#include "slitwave/propagation.hpp"

using namespace slitwave;

namespace {

const BeamParams beam(4.0 * pi * 1e10, 3.8189e-26);

ApertureSpec default_aperture() { return ApertureSpec::two_slit(1e-6, 0.25e-6, 8e-6); }

MomentumSpectrum default_spectrum(const Grid1D& kg) {
  return momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, kg);
}

// Midpoint sum of the Fresnel form for a constant field on [l, r].
complex fresnel_oracle(double value, double l, double r, double x, double y, std::size_t n) {
  const double k = beam.k();
  const double h = (r - l) / n;
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = l + (i + 0.5) * h;
    const double p = k * (x - u) * (x - u) / (2 * y);
    re += std::cos(p);
    im += std::sin(p);
  }
  return value * std::polar(1.0, -0.25 * pi) * std::sqrt(k / (2 * pi * y)) * complex(re * h, im * h);
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {Method::kirchhoff, Method::angular_spectrum, Method::fresnel, Method::far_field})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("huygens"), Error);
}

TEST_CASE("far-field threshold at default parameters") {
  const auto ap = default_aperture();
  const double yth = far_field_threshold(ap.extent(), beam);
  CHECK(yth == doctest::Approx(8.625e-6 * 8.625e-6 / (0.05 * 5e-11)).epsilon(1e-12));
  CHECK(fresnel_number(ap.extent(), beam, yth) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("angular spectrum at y = 0 reproduces the aperture away from the edges") {
  const auto ap = default_aperture();
  const auto bgrid = boundary_grid(ap);
  const auto kg = auto_momentum_grid(ap);
  const auto spec = default_spectrum(kg);
  // Every other boundary cell centre, covering both slits and the gap next to them.
  const Grid1D xg(bgrid.start(), 2 * bgrid.step(), bgrid.count() / 2);
  const auto f = propagate_angular_spectrum(spec, beam, 0.0, xg);
  const double inside = 1.0 / 1.25e-6;
  const double cell = bgrid.step();
  for (std::size_t i = 0; i < xg.count(); ++i) {
    const double x = xg.at(i);
    double edge_distance = 1.0;
    for (const auto& s : ap.slits())
      edge_distance = std::min({edge_distance, std::abs(x - s.x_left), std::abs(x - s.x_right)});
    if (edge_distance < 2 * cell) continue;
    const double expect = slit_index_at(ap, x) ? inside : 0.0;
    CAPTURE(x);
    CHECK(std::abs(std::norm(f.values[i]) - expect) < 1e-2 * inside);
  }
}

TEST_CASE("angular spectrum and Fresnel convolution agree at 1 mm") {
  const auto ap = default_aperture();
  const auto boundary = build_aperture_function(ap, boundary_grid(ap));
  const double y = 1e-3;
  const auto xg = auto_x_grid(ap, beam, y);
  const std::vector<double> ys{y};
  const std::vector<Grid1D> xgs{xg};
  const auto spec = default_spectrum(spectrum_grid_for_planes(ap, beam, ys, xgs));
  const auto as = propagate_angular_spectrum(spec, beam, y, xg);
  const auto fr = propagate_fresnel(boundary, beam, y, xg);
  CHECK(std::abs(as.mass() - 1.0) < 1e-3);
  CHECK(std::abs(fr.mass() - 1.0) < 1e-3);
  CHECK(max_relative_difference(as.intensity(), fr.intensity(), 1e-6) < 1e-3);
  CHECK(as.provenance == Provenance::angular_spectrum);
  CHECK(fr.provenance == Provenance::fresnel);
  CHECK(fr.y_plane == y);
}

TEST_CASE("Fresnel convolution of a single slit against a 1e6-node oracle") {
  const ApertureSpec ap({{-0.5e-6, 0.5e-6}});
  const auto boundary = build_aperture_function(ap, boundary_grid(ap));
  const double value = 1.0 / std::sqrt(1e-6);
  for (double y : {2e-4, 1e-3, 5e-3}) {
    const Grid1D xg(0.0, 0.3e-6, 3);
    const auto f = propagate_fresnel(boundary, beam, y, xg);
    for (std::size_t i = 0; i < 3; ++i) {
      const complex oracle = fresnel_oracle(value, -0.5e-6, 0.5e-6, xg.at(i), y, 1'000'000);
      CAPTURE(y);
      CAPTURE(xg.at(i));
      CHECK(std::abs(f.values[i] - oracle) / std::abs(oracle) < 1e-6);
    }
  }
}

TEST_CASE("on-axis single-slit Fresnel oscillations flatten with distance") {
  // Fresnel number N = delta^2 / (lambda y) sweeps from ~40 down to ~0.4.
  const ApertureSpec ap({{-0.5e-6, 0.5e-6}});
  const auto boundary = build_aperture_function(ap, boundary_grid(ap));
  const auto swing = [&](double y_lo, double y_hi) {
    std::vector<double> v;
    for (int n = 0; n <= 200; ++n) {
      const double y = y_lo * std::pow(y_hi / y_lo, n / 200.0);
      const auto f = propagate_fresnel(boundary, beam, y, Grid1D(0.0, 1e-9, 2));
      v.push_back(std::norm(f.values[0]) * y);
    }
    // wiggle count: sign changes of the discrete second difference of log intensity
    int turns = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      if ((v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0) ++turns;
    return turns;
  };
  CHECK(swing(5e-4, 2.5e-3) > 2);
  CHECK(swing(5e-2, 2.5e-1) == 0);
}

TEST_CASE("Kirchhoff obliquity and prefactor") {
  CHECK(obliquity_factor(1e-3, 0.0) == 2.0);
  CHECK(obliquity_factor(1.0, 1.0) == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-15));

  PropagationConfig cfg;
  cfg.source_amplitude = 3.0;
  cfg.source_distance = 0.7;
  CHECK(kirchhoff_prefactor_modulus(beam, cfg) == doctest::Approx(3.0 / (2 * 5e-11 * 0.7)).epsilon(1e-14));

  // Raw Kirchhoff over Fresnel tends to A / (a sqrt(lambda y)) near the axis.
  const ApertureSpec ap({{-0.5e-6, 0.5e-6}});
  const auto boundary = build_aperture_function(ap, boundary_grid(ap));
  cfg.rescale_to_unit_mass = false;
  const double y = 2e-3;
  const Grid1D xg(-0.4e-6, 0.2e-6, 5);
  const auto raw = propagate_kirchhoff(boundary, beam, cfg, y, xg);
  const auto fr = propagate_fresnel(boundary, beam, y, xg);
  const double expect = 3.0 / (0.7 * std::sqrt(beam.wavelength() * y));
  for (std::size_t i = 0; i < xg.count(); ++i)
    CHECK(std::abs(raw.values[i]) / std::abs(fr.values[i]) == doctest::Approx(expect).epsilon(1e-6));

  cfg.method = Method::fresnel;
  CHECK_THROWS_AS(propagate_kirchhoff(boundary, beam, cfg, y, xg), Error);
  cfg.method = Method::kirchhoff;
  cfg.source_distance = 0.0;
  CHECK_THROWS_AS(propagate_kirchhoff(boundary, beam, cfg, y, xg), Error);
}

TEST_CASE("rescaled Kirchhoff matches Fresnel in the paraxial regime") {
  const auto ap = default_aperture();
  const auto boundary = build_aperture_function(ap, boundary_grid(ap));
  const double y = 5e-3;
  const Grid1D xg = Grid1D::symmetric(6e-6, 2e-8);
  PropagationConfig cfg;
  const auto kf = propagate_kirchhoff(boundary, beam, cfg, y, xg);
  const auto fr = propagate_fresnel(boundary, beam, y, xg);
  CHECK(std::abs(kf.mass() - 1.0) < 1e-12);
  CHECK(l1_distance(normalized(kf.intensity(), xg), normalized(fr.intensity(), xg), xg) < 1e-2);
}

TEST_CASE("far field closed form") {
  const auto ap = default_aperture();
  const auto spec = default_spectrum(auto_momentum_grid(ap));
  const double y = 100.0;
  const auto f = far_field_wavefunction(spec, beam, y, Grid1D(-1e-3, 1e-3, 3));
  CHECK(std::norm(f.values[1]) * y / beam.k() == doctest::Approx(1.25e-6 / (2 * pi)).epsilon(1e-12));
  CHECK(f.provenance == Provenance::far_field);
  CHECK_THROWS_WITH_AS(far_field_wavefunction(spec, beam, 1.0, Grid1D(-1e-3, 1e-3, 3)),
                       doctest::Contains("not-in-far-field"), Error);

  // single slit: the first sinc zero maps to a dark point at x = 2 pi y / (k delta)
  const ApertureSpec single({{-0.5e-6, 0.5e-6}});
  const auto sspec = momentum_amplitude_numeric(build_aperture_function(single, boundary_grid(single)),
                                                auto_momentum_grid(single));
  const double yd = 50.0;
  const double x0 = 2 * pi * yd / (beam.k() * 1e-6);
  const auto g = far_field_wavefunction(sspec, beam, yd, Grid1D(0.0, x0, 2));
  CHECK(std::norm(g.values[1]) < 1e-12 * std::norm(g.values[0]));
}

TEST_CASE("interpolated spectrum matches the closed form between nodes") {
  const auto ap = default_aperture();
  const auto spec = default_spectrum(auto_momentum_grid(ap));
  const double peak = std::abs(two_slit_amplitude(0.0, 1e-6, 0.25e-6, 8e-6));
  for (double k : {1234.5, 3.21e5, -7.77e6, 1.9e8}) {
    const complex exact = two_slit_amplitude(k, 1e-6, 0.25e-6, 8e-6);
    CHECK(std::abs(interpolate_amplitude(spec, k) - exact) < 1e-6 * peak);
  }
  CHECK_THROWS_AS(interpolate_amplitude(spec, 1e12), Error);
}

TEST_CASE("far field and angular spectrum agree beyond ten times the threshold") {
  const auto ap = default_aperture();
  const double y = 10.0 * far_field_threshold(ap.extent(), beam);
  XGridOptions coarse;
  coarse.oversample = 2.0;
  const auto xg = auto_x_grid(ap, beam, y, coarse);
  const std::vector<double> ys{y};
  const std::vector<Grid1D> xgs{xg};
  const auto spec = default_spectrum(spectrum_grid_for_planes(ap, beam, ys, xgs));
  const auto as = propagate_angular_spectrum(spec, beam, y, xg);
  const auto ff = far_field_wavefunction(spec, beam, y, xg);
  CHECK(std::abs(as.mass() - 1.0) < 1e-3);
  CHECK(std::abs(ff.mass() - 1.0) < 1e-3);
  CHECK(l1_distance(normalized(as.intensity(), xg), normalized(ff.intensity(), xg), xg) < 0.02);
}

TEST_CASE("far-zone features spread linearly with distance") {
  const auto ap = default_aperture();
  const double yth = far_field_threshold(ap.extent(), beam);
  const Grid1D kg = Grid1D::symmetric(5e7, 2e3);
  const auto spec = default_spectrum(kg);
  std::vector<double> ys, xs;
  for (double f : {1.0, 2.0, 4.0, 7.0, 10.0}) {
    const double y = f * yth;
    // first dark fringe right of the central maximum
    const double period = 2 * pi * y / (beam.k() * 8e-6);
    const Grid1D xg(0.0, period / 400, 400);
    const auto field = propagate_angular_spectrum(spec, beam, y, xg);
    auto minus = field.intensity();
    const double top = *std::max_element(minus.begin(), minus.end());
    for (auto& v : minus) v = top - v;
    const auto minima = find_peaks(minus, xg, 0.5);
    REQUIRE(!minima.empty());
    ys.push_back(y);
    xs.push_back(minima.front());
  }
  // least-squares line
  const double n = ys.size();
  double sy = 0, sx = 0, syy = 0, syx = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    sy += ys[i];
    sx += xs[i];
    syy += ys[i] * ys[i];
    syx += ys[i] * xs[i];
  }
  const double slope = (n * syx - sy * sx) / (n * syy - sy * sy);
  const double icept = (sx - slope * sy) / n;
  for (std::size_t i = 0; i < ys.size(); ++i)
    CHECK(std::abs(xs[i] - (slope * ys[i] + icept)) < 1e-2 * xs[i]);
}

TEST_CASE("transverse psi is the angular spectrum at y = v t, bit for bit") {
  const auto ap = default_aperture();
  const Grid1D kg = Grid1D::symmetric(5e7, 2e3);
  const auto spec = default_spectrum(kg);
  const double t = 0.5;  // y = v t ~ 174 m
  const Grid1D xg = Grid1D::symmetric(2e-2, 1e-4);
  const auto a = transverse_psi(spec, beam, t, xg);
  const auto b = propagate_angular_spectrum(spec, beam, beam.velocity() * t, xg);
  CHECK(a.values == b.values);
  CHECK_THROWS_AS(transverse_psi(spec, beam, -1.0, xg), Error);
}

TEST_CASE("angular spectrum rejects spectra that cannot feed the window") {
  const auto ap = default_aperture();
  const auto spec = default_spectrum(Grid1D::symmetric(5e7, 2e3));
  // detector far outside the k range the grid can map at 1 mm
  CHECK_THROWS_WITH_AS(propagate_angular_spectrum(spec, beam, 1e-3, Grid1D::symmetric(4e-5, 1e-7)),
                       doctest::Contains("spectrum-tail-unresolved"), Error);
  const auto coarse = default_spectrum(Grid1D::symmetric(5e7, 1e5));
  CHECK_THROWS_WITH_AS(propagate_angular_spectrum(coarse, beam, 300.0, Grid1D::symmetric(1e-3, 1e-5)),
                       doctest::Contains("spectrum-tail-unresolved"), Error);
}

TEST_CASE("|c| recovered from propagated fields does not depend on the plane") {
  const auto ap = default_aperture();
  const Grid1D kg = Grid1D::symmetric(5e7, 2e3);
  const auto spec = default_spectrum(kg);
  std::vector<double> ks;
  for (int i = -20; i <= 20; ++i) ks.push_back(i * 9.7e5);
  std::vector<std::vector<complex>> rec;
  for (double y : {60.0, 300.0}) {
    const double period = 2 * pi * y / (beam.k() * 8.625e-6);
    const double span = 2.5e7 * y / beam.k();
    const auto field = propagate_angular_spectrum(spec, beam, y, Grid1D::symmetric(span, period / 200));
    rec.push_back(recover_amplitude(field, beam, ap.left_edge(), ap.right_edge(), ks));
  }
  const double peak = std::abs(rec[0][20]);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CAPTURE(ks[i]);
    CHECK(std::abs(std::abs(rec[0][i]) - std::abs(rec[1][i])) <= 1e-3 * std::max(std::abs(rec[1][i]), 1e-3 * peak));
    const double exact = std::abs(two_slit_amplitude(ks[i], 1e-6, 0.25e-6, 8e-6));
    CHECK(std::abs(std::abs(rec[0][i]) - exact) <= 1e-3 * std::max(exact, 1e-3 * peak));
  }
}
