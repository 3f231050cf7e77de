#pragma once

#include <cstddef>

namespace slitwave {

/// Every kernel runs the same per-point body either serially (the reference
/// path) or under OpenMP. Points never share accumulators, so both paths
/// produce bit-identical output.
enum class Execution { serial, parallel };

inline constexpr Execution default_execution = Execution::parallel;

template <class Body>
void for_each_point(std::size_t count, Execution exec, Body&& body) {
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  }
}

}  // namespace slitwave
