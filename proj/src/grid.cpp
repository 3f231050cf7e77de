#include "slitwave/grid.hpp"

#include <cmath>
#include <string>

#include "slitwave/error.hpp"

namespace slitwave {

Grid1D::Grid1D(double start, double step, std::size_t count)
    : start_(start), step_(step), count_(count) {
  if (!(step > 0.0) || !std::isfinite(step))
    fail_validation("grid step must be positive and finite, got " + std::to_string(step));
  if (!std::isfinite(start)) fail_validation("grid start must be finite");
  if (count < 2) fail_validation("grid needs at least 2 points");
}

Grid1D Grid1D::symmetric(double half_width, double step) {
  if (!(half_width > 0.0)) fail_validation("symmetric grid half-width must be positive");
  const auto half = static_cast<std::size_t>(std::ceil(half_width / step - 1e-9));
  return Grid1D(-static_cast<double>(half) * step, step, 2 * half + 1);
}

std::vector<double> Grid1D::points() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = at(i);
  return out;
}

}  // namespace slitwave
