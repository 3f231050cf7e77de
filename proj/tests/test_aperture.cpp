#include <cmath>
#include <random>

#include "doctest.h"
#include "slitwave/aperture.hpp"
#include "slitwave/error.hpp"

using namespace slitwave;

namespace {

ApertureSpec default_aperture() { return ApertureSpec::two_slit(1e-6, 0.25e-6, 8e-6); }

}  // namespace

TEST_CASE("two-slit constructor places wide slit left, narrow slit right") {
  const auto ap = default_aperture();
  REQUIRE(ap.size() == 2);
  CHECK(ap[0].x_left == doctest::Approx(-4.5e-6).epsilon(1e-12));
  CHECK(ap[0].x_right == doctest::Approx(-3.5e-6).epsilon(1e-12));
  CHECK(ap[1].x_left == doctest::Approx(3.875e-6).epsilon(1e-12));
  CHECK(ap[1].x_right == doctest::Approx(4.125e-6).epsilon(1e-12));
  CHECK(ap.total_width() == doctest::Approx(1.25e-6).epsilon(1e-12));
  CHECK(ap.extent() == doctest::Approx(8.625e-6).epsilon(1e-12));
}

TEST_CASE("aperture rejects overlapping or inverted slits") {
  CHECK_THROWS_AS(ApertureSpec({{0.0, 1e-6}, {0.5e-6, 2e-6}}), Error);
  CHECK_THROWS_AS(ApertureSpec({{1e-6, 0.0}}), Error);
  CHECK_THROWS_AS(ApertureSpec(std::vector<SlitInterval>{}), Error);
  CHECK_THROWS_AS(ApertureSpec::two_slit(1e-6, 1e-6, 0.5e-6), Error);
}

TEST_CASE("slit_index_at") {
  const auto ap = default_aperture();
  CHECK(slit_index_at(ap, -4e-6) == std::optional<std::size_t>(0));
  CHECK_FALSE(slit_index_at(ap, 0.0).has_value());
  CHECK(slit_index_at(ap, ap[1].x_right) == std::optional<std::size_t>(1));
  CHECK(slit_index_at(ap, ap[0].x_left) == std::optional<std::size_t>(0));
  CHECK_FALSE(slit_index_at(ap, 5e-6).has_value());
}

TEST_CASE("boundary field value, gap and mass") {
  const auto ap = default_aperture();
  const auto field = build_aperture_function(ap, boundary_grid(ap));
  CHECK(field.provenance == Provenance::boundary);

  double peak = 0.0;
  for (std::size_t i = 0; i < field.grid.count(); ++i) {
    const double x = field.grid.at(i);
    if (slit_index_at(ap, x)) peak = std::max(peak, std::abs(field.values[i]));
    if (std::abs(x) < 3e-6) CHECK(field.values[i] == complex(0.0));
  }
  CHECK(peak == doctest::Approx(894.427190999916).epsilon(1e-12));
  CHECK(std::abs(field.mass() - 1.0) < 1e-9);
}

TEST_CASE("symmetric two-slit field is even") {
  const auto ap = ApertureSpec::two_slit(0.5e-6, 0.5e-6, 3e-6);
  // cell-centred grid: slit edges fall on cell faces, never on sample points
  const double step = 0.5e-6 / 32;
  const Grid1D grid(-199.5 * step, step, 400);
  const auto field = build_aperture_function(ap, grid);
  const std::size_t n = grid.count();
  for (std::size_t i = 0; i < n; ++i) CHECK(field.values[i] == field.values[n - 1 - i]);
}

TEST_CASE("grid preconditions") {
  const auto ap = default_aperture();
  // 8 cells across the narrow slit
  CHECK_THROWS_WITH_AS(build_aperture_function(ap, Grid1D::symmetric(6e-6, 0.25e-6 / 8)),
                       doctest::Contains("grid-too-coarse"), Error);
  CHECK_THROWS_WITH_AS(build_aperture_function(ap, Grid1D::symmetric(4e-6, 0.25e-6 / 32)),
                       doctest::Contains("grid-does-not-cover-aperture"), Error);
}

TEST_CASE("shifting the aperture by whole cells shifts the field by the same cells") {
  const auto ap = default_aperture();
  const auto grid = boundary_grid(ap, 40);
  const auto base = build_aperture_function(ap, grid);
  for (int cells : {-7, 3, 12}) {
    const auto moved = build_aperture_function(ap.shifted(cells * grid.step()), grid);
    for (std::size_t i = 0; i < grid.count(); ++i) {
      const auto j = static_cast<std::ptrdiff_t>(i) - cells;
      const complex expect =
          (j >= 0 && j < static_cast<std::ptrdiff_t>(grid.count())) ? base.values[j] : complex(0.0);
      REQUIRE(moved.values[i] == expect);
    }
  }
}

TEST_CASE("mass is unity for random apertures and grids") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> width(0.1e-6, 2e-6), gap(0.2e-6, 5e-6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SlitInterval> slits;
    double x = -3e-6;
    const int n = 1 + trial % 4;
    for (int s = 0; s < n; ++s) {
      const double w = width(rng);
      slits.push_back({x, x + w});
      x += w + gap(rng);
    }
    const ApertureSpec ap(slits);
    const auto field = build_aperture_function(ap, boundary_grid(ap));
    CHECK(std::abs(field.mass() - 1.0) < 1e-6);
  }
}

TEST_CASE("passing mask is strict and monotone in the diameter") {
  const auto ap = default_aperture();
  CHECK(ap.passing_mask(0.0) == std::vector<bool>{true, true});
  CHECK(ap.passing_mask(0.5e-6) == std::vector<bool>{true, false});
  CHECK(ap.passing_mask(0.25e-6) == std::vector<bool>{true, false});
  CHECK(ap.passing_mask(1e-6) == std::vector<bool>{false, false});

  std::vector<bool> previous = ap.passing_mask(0.0);
  for (double D = 0.0; D < 1.2e-6; D += 0.01e-6) {
    const auto mask = ap.passing_mask(D);
    for (std::size_t i = 0; i < mask.size(); ++i) CHECK((!mask[i] || previous[i]));
    previous = mask;
  }
}

TEST_CASE("beam derived quantities") {
  const BeamParams beam(4.0 * pi * 1e10, 3.8189e-26);
  CHECK(beam.wavelength() == doctest::Approx(5e-11).epsilon(1e-12));
  CHECK(beam.velocity() == doctest::Approx(347.015).epsilon(1e-5));
  CHECK(beam.omega() == doctest::Approx(0.5 * beam.k() * beam.velocity()).epsilon(1e-12));
  CHECK_THROWS_AS(BeamParams(-1.0, 1.0), Error);
  CHECK_THROWS_AS(BeamParams(1.0, 1.0, -1e-6), Error);
}
