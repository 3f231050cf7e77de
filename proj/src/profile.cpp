#include "slitwave/profile.hpp"

#include <algorithm>
#include <cmath>

#include "slitwave/error.hpp"
#include "slitwave/quadrature.hpp"

namespace slitwave {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail_validation("grid-mismatch: profiles have different lengths");
}

}  // namespace

std::vector<double> normalized(std::span<const double> profile, const Grid1D& grid) {
  const double mass = integrate_smooth(profile, grid, grid.start(), grid.back());
  if (!(mass > 0.0)) fail_validation("cannot normalize a profile with zero mass");
  std::vector<double> out(profile.begin(), profile.end());
  for (auto& v : out) v /= mass;
  return out;
}

double l1_distance(std::span<const double> a, std::span<const double> b, const Grid1D& grid) {
  require_same_size(a, b);
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
  return integrate_smooth(diff, grid, grid.start(), grid.back());
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_relative_difference(std::span<const double> a, std::span<const double> b, double floor) {
  require_same_size(a, b);
  double peak = 0.0;
  for (double v : b) peak = std::max(peak, std::abs(v));
  const double denom_floor = floor * peak;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max(std::abs(b[i]), denom_floor);
    if (denom > 0.0) worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

std::vector<double> find_peaks(std::span<const double> values, const Grid1D& grid, double min_height) {
  double top = 0.0;
  for (double v : values) top = std::max(top, v);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double l = values[i - 1], c = values[i], r = values[i + 1];
    if (!(c > l && c >= r) || c < min_height * top) continue;
    const double curvature = l - 2.0 * c + r;
    const double shift = curvature != 0.0 ? 0.5 * (l - r) / curvature : 0.0;
    peaks.push_back(grid.at(i) + shift * grid.step());
  }
  return peaks;
}

double median_peak_spacing(std::span<const double> values, const Grid1D& grid, double lo, double hi,
                           double min_height) {
  std::vector<double> inside;
  for (double p : find_peaks(values, grid, min_height))
    if (p >= lo && p <= hi) inside.push_back(p);
  if (inside.size() < 2) return 0.0;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < inside.size(); ++i) gaps.push_back(inside[i] - inside[i - 1]);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return gaps[gaps.size() / 2];
}

}  // namespace slitwave
