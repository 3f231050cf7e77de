#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "slitwave/grid.hpp"

namespace slitwave {

using complex = std::complex<double>;

/// Reduced Planck constant, J s (CODATA 2018).
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double pi = 3.14159265358979323846;

struct SlitInterval {
  double x_left;
  double x_right;

  double width() const noexcept { return x_right - x_left; }
  double center() const noexcept { return 0.5 * (x_left + x_right); }
  bool contains(double x) const noexcept { return x >= x_left && x <= x_right; }
};

/// Ordered, pairwise-disjoint set of open slits along the grating line.
class ApertureSpec {
 public:
  explicit ApertureSpec(std::vector<SlitInterval> slits);

  /// Wide slit of width delta1 centred at -d/2, narrow slit delta2 at +d/2.
  static ApertureSpec two_slit(double delta1, double delta2, double d);

  const std::vector<SlitInterval>& slits() const noexcept { return slits_; }
  std::size_t size() const noexcept { return slits_.size(); }
  const SlitInterval& operator[](std::size_t i) const { return slits_[i]; }

  double total_width() const noexcept;
  double min_width() const noexcept;
  double left_edge() const noexcept { return slits_.front().x_left; }
  double right_edge() const noexcept { return slits_.back().x_right; }
  /// Outermost edge span W.
  double extent() const noexcept { return right_edge() - left_edge(); }
  double center() const noexcept { return 0.5 * (left_edge() + right_edge()); }

  ApertureSpec shifted(double delta) const;

  /// Case-b admissibility: slit i transmits a particle of diameter D iff width > D.
  std::vector<bool> passing_mask(double diameter) const;

 private:
  std::vector<SlitInterval> slits_;
};

/// Index of the slit containing x (edges inclusive), if any.
std::optional<std::size_t> slit_index_at(const ApertureSpec& aperture, double x);

class BeamParams {
 public:
  BeamParams(double k, double mass, double diameter = 0.0);

  double k() const noexcept { return k_; }
  double mass() const noexcept { return mass_; }
  double diameter() const noexcept { return diameter_; }

  double wavelength() const noexcept { return 2.0 * pi / k_; }
  double velocity() const noexcept { return hbar * k_ / mass_; }
  double omega() const noexcept { return hbar * k_ * k_ / (2.0 * mass_); }

  BeamParams with_diameter(double diameter) const { return {k_, mass_, diameter}; }

 private:
  double k_;
  double mass_;
  double diameter_;
};

enum class Provenance { boundary, kirchhoff, angular_spectrum, fresnel, far_field };

std::string_view to_string(Provenance p);

/// Sampled transverse wave function at a fixed plane y. The carried factors
/// e^{iky} and e^{-i omega t} are never sampled.
///
/// For provenance::boundary the values are cell values: sample i holds the
/// constant amplitude on [x_i - step/2, x_i + step/2].
struct ComplexField {
  Grid1D grid;
  std::vector<complex> values;
  double y_plane = 0.0;
  Provenance provenance = Provenance::boundary;

  std::vector<double> intensity() const;
  /// Integral of |values|^2 over the grid (trapezoid; equal to the cell sum
  /// for boundary fields whose end cells are empty).
  double mass() const;
};

/// Number of cells that must fit across the narrowest slit.
inline constexpr double min_cells_per_slit = 16.0;

/// Cell-centred grid whose cell boundaries land on every slit edge when the
/// edges are commensurate, with `padding` empty cells on each side.
Grid1D boundary_grid(const ApertureSpec& aperture, std::size_t padding = 16);

/// Boundary wave function: constant inside the open region, zero outside.
/// A cell is open iff its centre lies inside a slit. The constant is
/// 1/sqrt(open measure), which equals 1/sqrt(sum of widths) when the grid
/// aligns with the edges.
ComplexField build_aperture_function(const ApertureSpec& aperture, const Grid1D& grid);

}  // namespace slitwave
