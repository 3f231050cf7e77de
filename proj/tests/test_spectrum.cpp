#include <cmath>
#include <random>

#include "doctest.h"
#include "slitwave/error.hpp"
#include "slitwave/spectrum.hpp"

using namespace slitwave;

namespace {

ApertureSpec default_aperture() { return ApertureSpec::two_slit(1e-6, 0.25e-6, 8e-6); }

// Midpoint sum of (2 pi)^{-1/2} \int phi e^{-ikx} dx with every boundary cell split
// into equal sub-cells, about 1e5 nodes in total.
std::vector<complex> riemann_spectrum(const ComplexField& field, const std::vector<double>& ks) {
  const std::size_t cells = field.grid.count();
  const std::size_t sub = (100'000 + cells - 1) / cells;
  const double h = field.grid.step() / sub;
  std::vector<complex> out;
  for (double k : ks) {
    complex acc{};
    for (std::size_t j = 0; j < cells; ++j) {
      if (field.values[j] == complex(0.0)) continue;
      const double left = field.grid.at(j) - 0.5 * field.grid.step();
      double re = 0, im = 0;
      for (std::size_t s = 0; s < sub; ++s) {
        const double x = left + (s + 0.5) * h;
        re += std::cos(k * x);
        im -= std::sin(k * x);
      }
      acc += field.values[j] * complex(re, im);
    }
    out.push_back(acc * h / std::sqrt(2 * M_PI));
  }
  return out;
}

}  // namespace

TEST_CASE("sinc and the closed form near zero") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6).epsilon(1e-15));
  CHECK(sinc(M_PI) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const complex c0 = two_slit_amplitude(0.0, 1e-6, 0.25e-6, 8e-6);
  CHECK(c0.real() == doctest::Approx(std::sqrt(1.25e-6 / (2 * M_PI))).epsilon(1e-14));
  CHECK(c0.real() == doctest::Approx(4.460e-4).epsilon(1e-3));
  // both sides of the series threshold against the closed form in long double
  for (double z : {0.5e-4, 0.99e-4, 1.01e-4, 3e-4}) {
    const long double k = z / 1e-6;
    const long double d1 = 1e-6L, d2 = 0.25e-6L, d = 8e-6L;
    const long double re = 2 / k * (std::cos(k * d / 2) * std::sin(k * d1 / 2) + std::cos(k * d / 2) * std::sin(k * d2 / 2));
    const long double im = 2 / k * (std::sin(k * d / 2) * std::sin(k * d1 / 2) - std::sin(k * d / 2) * std::sin(k * d2 / 2));
    const long double norm = 1 / std::sqrt(2 * M_PI * 1.25e-6L);
    const complex exact(static_cast<double>(re * norm), static_cast<double>(im * norm));
    CAPTURE(z);
    CHECK(std::abs(two_slit_amplitude(static_cast<double>(k), 1e-6, 0.25e-6, 8e-6) - exact) < 1e-13 * std::abs(c0));
  }
}

TEST_CASE("single slit has sinc zeros at 2 pi j / delta") {
  const double delta = 0.7e-6;
  for (int j : {-3, -1, 1, 2, 5}) {
    const double k = 2 * M_PI * j / delta;
    CHECK(std::abs(two_slit_amplitude(k, delta, 0.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("numeric spectrum at k = 0 and k = 1e6 against the closed form") {
  const auto ap = default_aperture();
  const auto field = build_aperture_function(ap, boundary_grid(ap));
  const Grid1D kg(0.0, 1e6, 2);
  const auto num = momentum_amplitude_numeric(field, kg);
  const auto ana = momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, kg);
  CHECK(num.values[0].real() == doctest::Approx(std::sqrt(1.25e-6 / (2 * M_PI))).epsilon(1e-12));
  CHECK(std::abs(num.values[0].imag()) < 1e-18);
  CHECK(std::abs(num.values[1] - ana.values[1]) / std::abs(ana.values[1]) < 1e-9);
  CHECK(ana.source == SpectrumSource::analytic_two_slit);
  CHECK(num.source == SpectrumSource::numeric_ft);
}

TEST_CASE("shifting the aperture multiplies c by e^{-ik delta}") {
  const auto ap = default_aperture();
  const auto grid = boundary_grid(ap, 64);
  const double delta = 37 * grid.step();
  const Grid1D kg(-3e7, 1.37e5, 400);
  const auto a = momentum_amplitude_numeric(build_aperture_function(ap, grid), kg);
  const auto b = momentum_amplitude_numeric(build_aperture_function(ap.shifted(delta), grid), kg);
  const double peak = std::abs(a.values[0]) + std::abs(a.values[200]);
  for (std::size_t i = 0; i < kg.count(); ++i) {
    const complex expect = a.values[i] * std::polar(1.0, -kg.at(i) * delta);
    CHECK(std::abs(b.values[i] - expect) < 1e-12 * peak);
    CHECK(std::abs(std::abs(b.values[i]) - std::abs(a.values[i])) < 1e-12 * peak);
  }
}

TEST_CASE("numeric spectrum equals a 1e5-node Riemann sum for random apertures") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> width(0.2e-6, 1.5e-6), gap(0.3e-6, 4e-6), kdist(-2e7, 2e7);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<SlitInterval> slits;
    double x = -4e-6;
    for (int s = 0; s < 1 + trial % 4; ++s) {
      const double w = width(rng);
      slits.push_back({x, x + w});
      x += w + gap(rng);
    }
    const ApertureSpec ap(slits);
    const auto field = build_aperture_function(ap, boundary_grid(ap));
    std::vector<double> ks(16);
    for (auto& k : ks) k = kdist(rng);
    std::sort(ks.begin(), ks.end());
    const auto oracle = riemann_spectrum(field, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto c = momentum_amplitude_numeric(field, Grid1D(ks[i], 1.0, 2)).values[0];
      CAPTURE(trial);
      CAPTURE(ks[i]);
      CHECK(std::abs(c - oracle[i]) / std::abs(oracle[i]) < 1e-6);
    }
  }
}

TEST_CASE("Parseval for analytic and numeric spectra on the automatic grid") {
  const auto ap = default_aperture();
  const auto kg = auto_momentum_grid(ap);
  const auto field = build_aperture_function(ap, boundary_grid(ap));
  const auto num = momentum_amplitude_numeric(field, kg);
  const auto ana = momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, kg);
  CHECK(std::abs(MomentumMass(num).total() - 1.0) < 1e-4);
  CHECK(std::abs(MomentumMass(ana).total() - 1.0) < 1e-4);

  // the tail estimate accounts for what the grid misses
  const auto tail = estimate_tail_mass(ana);
  CHECK(std::abs(MomentumMass(ana).total() + tail.below + tail.above - 1.0) < 1e-5);

  // real boundary field: |c| even
  const std::size_t n = kg.count();
  for (std::size_t i = 0; i < n; i += 997)
    CHECK(std::abs(std::abs(num.values[i]) - std::abs(num.values[n - 1 - i])) <
          1e-12 * std::abs(num.values[n / 2]));
}

TEST_CASE("momentum_mass elementary cases") {
  const auto ap = default_aperture();
  const auto kg = auto_momentum_grid(ap);
  const auto spec = momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, kg);
  const MomentumMass mass(spec);
  CHECK(std::abs(mass(kg.start(), kg.back()) - 1.0) < 1e-4);
  CHECK(mass(1.234e7, 1.234e7) == 0.0);
  for (double K : {1e6, 3.3e7, 1e9}) CHECK(mass(-K, K) == doctest::Approx(2 * mass(0.0, K)).epsilon(1e-10));
  CHECK_THROWS_AS(mass(1.0, 0.0), Error);
  CHECK(momentum_mass(spec, -1e9, 1e9) == mass(-1e9, 1e9));
}

TEST_CASE("limits far beyond a truncated grid violate the tail budget") {
  const Grid1D kg = Grid1D::symmetric(2e7, 2 * M_PI / (8 * 8.625e-6));
  const auto spec = momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, kg);
  const MomentumMass mass(spec);
  CHECK(mass(-1e7, 1e7) > 0.0);
  CHECK_THROWS_WITH_AS(mass(-1e9, 0.0), doctest::Contains("spectrum-tail-unresolved"), Error);
  CHECK_THROWS_WITH_AS(mass(0.0, 1e9), doctest::Contains("spectrum-tail-unresolved"), Error);
}

TEST_CASE("tail envelope and grid sizing") {
  const auto ap = default_aperture();
  const double K = k_max_for_tail(ap, 5e-5);
  CHECK(envelope_tail_mass(ap, K) == doctest::Approx(5e-5).epsilon(1e-9));
  const auto kg = auto_momentum_grid(ap);
  CHECK(kg.back() >= K);
  CHECK(kg.back() >= 200 * 2 * M_PI / 0.25e-6);
  CHECK(kg.step() < 2 * M_PI / ap.extent());
  // 0 is a node
  CHECK(kg.at(kg.count() / 2) == 0.0);
}

TEST_CASE("spectrum preconditions") {
  const Grid1D kg(0.0, 1.0, 2);
  CHECK_THROWS_WITH_AS(momentum_amplitude_analytic(1e-6, 1e-6, 0.5e-6, kg),
                       doctest::Contains("overlapping-slits"), Error);
  const auto ap = default_aperture();
  auto field = build_aperture_function(ap, boundary_grid(ap));
  for (auto& v : field.values) v *= 1.01;
  CHECK_THROWS_WITH_AS(momentum_amplitude_numeric(field, kg),
                       doctest::Contains("unnormalized-boundary"), Error);
}
