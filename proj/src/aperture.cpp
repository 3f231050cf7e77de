#include "slitwave/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slitwave/error.hpp"
#include "slitwave/quadrature.hpp"

namespace slitwave {

namespace {

// Edge differences carry a few ulps of cancellation noise (4.125e-6 - 3.875e-6 is not
// exactly 0.25e-6); snapping to 12 significant digits restores the intended width, so
// cell geometry does not drift over hundreds of cells and width == D ties stay ties.
double snap(double x) {
  if (x == 0.0) return x;
  const double scale = std::pow(10.0, 11 - std::floor(std::log10(std::abs(x))));
  return std::round(x * scale) / scale;
}

}  // namespace

ApertureSpec::ApertureSpec(std::vector<SlitInterval> slits) : slits_(std::move(slits)) {
  if (slits_.empty()) fail_validation("aperture needs at least one slit");
  for (std::size_t i = 0; i < slits_.size(); ++i) {
    const auto& s = slits_[i];
    if (!std::isfinite(s.x_left) || !std::isfinite(s.x_right))
      fail_validation("slit " + std::to_string(i + 1) + " has non-finite edges");
    if (!(s.x_left < s.x_right))
      fail_validation("slit " + std::to_string(i + 1) + " must satisfy x_left < x_right");
    if (i > 0 && !(slits_[i - 1].x_right < s.x_left))
      fail_validation("overlapping-slits: slits " + std::to_string(i) + " and " +
                      std::to_string(i + 1) + " are not sorted and disjoint");
  }
}

ApertureSpec ApertureSpec::two_slit(double delta1, double delta2, double d) {
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) fail_validation("slit widths must be positive");
  if (!(d > 0.5 * (delta1 + delta2)))
    fail_validation("overlapping-slits: separation d must exceed (delta1 + delta2)/2");
  return ApertureSpec({{0.5 * (-d - delta1), 0.5 * (-d + delta1)},
                       {0.5 * (d - delta2), 0.5 * (d + delta2)}});
}

double ApertureSpec::total_width() const noexcept {
  double sum = 0.0;
  for (const auto& s : slits_) sum += s.width();
  return sum;
}

double ApertureSpec::min_width() const noexcept {
  double w = slits_.front().width();
  for (const auto& s : slits_) w = std::min(w, s.width());
  return w;
}

ApertureSpec ApertureSpec::shifted(double delta) const {
  auto moved = slits_;
  for (auto& s : moved) {
    s.x_left += delta;
    s.x_right += delta;
  }
  return ApertureSpec(std::move(moved));
}

std::vector<bool> ApertureSpec::passing_mask(double diameter) const {
  std::vector<bool> mask(slits_.size());
  for (std::size_t i = 0; i < slits_.size(); ++i) mask[i] = snap(slits_[i].width()) > snap(diameter);
  return mask;
}

std::optional<std::size_t> slit_index_at(const ApertureSpec& aperture, double x) {
  for (std::size_t i = 0; i < aperture.size(); ++i)
    if (aperture[i].contains(x)) return i;
  return std::nullopt;
}

BeamParams::BeamParams(double k, double mass, double diameter)
    : k_(k), mass_(mass), diameter_(diameter) {
  if (!(k > 0.0) || !std::isfinite(k)) fail_validation("beam.k must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) fail_validation("beam.mass must be positive");
  if (!(diameter >= 0.0) || !std::isfinite(diameter))
    fail_validation("beam.diameter must be non-negative");
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::boundary: return "boundary";
    case Provenance::kirchhoff: return "kirchhoff";
    case Provenance::angular_spectrum: return "angular-spectrum";
    case Provenance::fresnel: return "fresnel";
    case Provenance::far_field: return "far-field";
  }
  return "unknown";
}

std::vector<double> ComplexField::intensity() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](complex v) { return std::norm(v); });
  return out;
}

double ComplexField::mass() const {
  const auto rho = intensity();
  return integrate_smooth(rho, grid, grid.start(), grid.back());
}

namespace {

bool is_multiple(double length, double step) {
  const double q = length / step;
  return std::abs(q - std::round(q)) < 1e-6;
}


}  // namespace

Grid1D boundary_grid(const ApertureSpec& aperture, std::size_t padding) {
  const double origin = aperture.left_edge();
  const double base = snap(aperture.min_width()) / min_cells_per_slit;
  double step = base;
  for (int refine = 1; refine <= 64; ++refine) {
    const double candidate = base / refine;
    const bool aligned = std::all_of(
        aperture.slits().begin(), aperture.slits().end(), [&](const SlitInterval& s) {
          return is_multiple(s.x_left - origin, candidate) &&
                 is_multiple(s.x_right - origin, candidate);
        });
    if (aligned) {
      step = candidate;
      break;
    }
  }
  const auto inner = static_cast<std::size_t>(std::ceil(aperture.extent() / step - 1e-6));
  const double first_center = origin - (static_cast<double>(padding) - 0.5) * step;
  return Grid1D(first_center, step, inner + 2 * padding);
}

ComplexField build_aperture_function(const ApertureSpec& aperture, const Grid1D& grid) {
  const double half = 0.5 * grid.step();
  if (grid.start() - half > aperture.left_edge() || grid.back() + half < aperture.right_edge() ||
      slit_index_at(aperture, grid.start()) || slit_index_at(aperture, grid.back()))
    fail_validation("grid-does-not-cover-aperture: the boundary grid must extend past every slit");
  if (aperture.min_width() / grid.step() < min_cells_per_slit * (1.0 - 1e-9))
    fail_validation("grid-too-coarse: narrowest slit spans " +
                    std::to_string(aperture.min_width() / grid.step()) + " cells, need " +
                    std::to_string(static_cast<int>(min_cells_per_slit)));

  std::vector<char> open(grid.count(), 0);
  std::size_t open_cells = 0;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    if (slit_index_at(aperture, grid.at(i))) {
      open[i] = 1;
      ++open_cells;
    }
  }
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(open_cells) * grid.step());
  ComplexField field{grid, std::vector<complex>(grid.count()), 0.0, Provenance::boundary};
  for (std::size_t i = 0; i < grid.count(); ++i)
    if (open[i]) field.values[i] = amplitude;
  return field;
}

}  // namespace slitwave
