#pragma once

#include <cstddef>
#include <vector>

namespace slitwave {

/// Uniform 1-D grid: points start + i*step for i in [0, count).
class Grid1D {
 public:
  Grid1D(double start, double step, std::size_t count);

  /// Grid symmetric about zero with 0 as a sample point.
  static Grid1D symmetric(double half_width, double step);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double at(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
  double back() const noexcept { return at(count_ - 1); }
  double span() const noexcept { return back() - start_; }

  std::vector<double> points() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double start_;
  double step_;
  std::size_t count_;
};

}  // namespace slitwave
