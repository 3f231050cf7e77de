#include "slitwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "slitwave/error.hpp"

namespace slitwave {

void QuadratureBudget::validate() const {
  if (rule_order < 1) fail_validation("quadrature rule_order must be >= 1");
  if (max_nodes < static_cast<std::size_t>(rule_order))
    fail_validation("quadrature max_nodes must be >= rule_order");
  if (!(target_phase_step > 0.0) || target_phase_step > 3.14159265358979323846)
    fail_validation("quadrature target_phase_step must lie in (0, pi]");
}

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  // Absorb the rounding of the weight sum into the last weight so a constant
  // integrand over one cell returns the cell length exactly.
  double partial = 0.0;
  for (int i = 0; i + 1 < n; ++i) partial += rule.weights[i];
  rule.weights[n - 1] = 2.0 - partial;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex guard;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(guard);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

std::complex<double> integrate_oscillatory(
    const std::function<std::complex<double>(double)>& integrand,
    const std::function<double(double)>& phase_rate, double lo, double hi,
    const QuadratureBudget& budget) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail_validation("oscillatory integral needs a finite interval");
  if (hi == lo) return {0.0, 0.0};
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  const auto& rule = gauss_legendre(budget.rule_order);
  const double target = budget.target_phase_step;
  std::complex<double> sum{0.0, 0.0};
  std::size_t nodes = 0;
  double u = lo;
  double rate_u = std::abs(phase_rate(u));
  while (u < hi) {
    double h = hi - u;
    double rate_end = std::abs(phase_rate(u + h));
    for (int iter = 0; iter < 60; ++iter) {
      const double rate = std::max(rate_u, rate_end);
      if (rate * h <= target) break;
      h = target / rate;
      rate_end = std::abs(phase_rate(u + h));
    }
    const double v = (h >= hi - u) ? hi : u + h;
    const double half = 0.5 * (v - u);
    const double mid = 0.5 * (v + u);
    std::complex<double> cell{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      cell += rule.weights[j] * integrand(mid + half * rule.nodes[j]);
    sum += half * cell;
    nodes += rule.nodes.size();
    if (nodes > budget.max_nodes)
      fail_budget("quadrature-budget-exceeded: oscillatory integral needs more than " +
                  std::to_string(budget.max_nodes) + " nodes");
    u = v;
    rate_u = rate_end;
  }
  return sign * sum;
}

namespace {

constexpr int chirp_blocks = 16;

// Uniform cells over [lo, hi]; rows of equal-offset nodes share one recurrence.
std::complex<double> chirp_block(double a, double b, double lo, double hi, std::size_t cells,
                                 const GaussRule& rule) {
  const double h = (hi - lo) / static_cast<double>(cells);
  const double step_twist = 2.0 * a * h * h;
  const std::complex<double> twist = std::polar(1.0, step_twist);
  std::complex<double> total{0.0, 0.0};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double u0 = lo + 0.5 * h * (1.0 + rule.nodes[j]);
    std::complex<double> e = std::polar(1.0, (a * u0 + b) * u0);
    std::complex<double> d = std::polar(1.0, a * (2.0 * u0 * h + h * h) + b * h);
    std::complex<double> row{0.0, 0.0};
    for (std::size_t c = 0; c < cells; ++c) {
      row += e;
      e *= d;
      d *= twist;
    }
    total += rule.weights[j] * row;
  }
  return 0.5 * h * total;
}

}  // namespace

std::complex<double> integrate_chirp(double a, double b, double lo, double hi,
                                     const QuadratureBudget& budget) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail_validation("chirp integral needs a finite interval");
  if (hi == lo) return {0.0, 0.0};
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  const auto& rule = gauss_legendre(budget.rule_order);
  const auto rate = [&](double u) { return std::abs(2.0 * a * u + b); };

  std::vector<double> cuts{lo};
  if (a != 0.0) {
    const double stationary = -b / (2.0 * a);
    if (stationary > lo && stationary < hi) cuts.push_back(stationary);
  }
  cuts.push_back(hi);

  std::complex<double> sum{0.0, 0.0};
  std::size_t nodes = 0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double len = (cuts[p + 1] - cuts[p]) / chirp_blocks;
    for (int blk = 0; blk < chirp_blocks; ++blk) {
      const double l = cuts[p] + blk * len;
      const double r = (blk + 1 == chirp_blocks) ? cuts[p + 1] : l + len;
      const double span = std::max(rate(l), rate(r)) * (r - l);
      const auto cells =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / budget.target_phase_step)));
      nodes += cells * rule.nodes.size();
      if (nodes > budget.max_nodes)
        fail_budget("quadrature-budget-exceeded: chirp integral needs more than " +
                    std::to_string(budget.max_nodes) + " nodes");
      sum += chirp_block(a, b, l, r, cells, rule);
    }
  }
  return sign * sum;
}

namespace {

struct Position {
  std::size_t cell;  // index of the left sample of the containing cell
  double frac;       // offset inside the cell, in units of step
};

Position locate(const Grid1D& grid, double x) {
  const double s = (x - grid.start()) / grid.step();
  const auto last = static_cast<double>(grid.count() - 1);
  if (s <= 0.0) return {0, 0.0};
  if (s >= last) return {grid.count() - 2, 1.0};
  const auto cell = static_cast<std::size_t>(std::floor(s));
  return {cell, s - static_cast<double>(cell)};
}

// Integral of the linear interpolant over [x_cell, x_cell + frac*step].
double partial_cell(std::span<const double> f, const Grid1D& grid, const Position& p) {
  const double a = f[p.cell];
  const double b = f[p.cell + 1];
  const double at = a + (b - a) * p.frac;
  return 0.5 * (a + at) * p.frac * grid.step();
}

}  // namespace

double integrate_smooth(std::span<const double> samples, const Grid1D& grid, double lo, double hi) {
  if (samples.size() != grid.count()) fail_validation("sample count does not match grid");
  if (lo > hi) fail_validation("integrate_smooth needs lo <= hi");
  const double slack = 1e-9 * grid.step();
  if (lo < grid.start() - slack || hi > grid.back() + slack)
    fail_validation("out-of-span: integration limits lie outside the sampled grid");
  if (lo == hi) return 0.0;
  const Position a = locate(grid, lo);
  const Position b = locate(grid, hi);
  double sum = 0.0;
  for (std::size_t i = a.cell; i < b.cell; ++i) sum += 0.5 * (samples[i] + samples[i + 1]) * grid.step();
  return sum + partial_cell(samples, grid, b) - partial_cell(samples, grid, a);
}

CumulativeIntegral::CumulativeIntegral(std::vector<double> samples, const Grid1D& grid)
    : samples_(std::move(samples)), prefix_(grid.count(), 0.0), grid_(grid) {
  if (samples_.size() != grid.count()) fail_validation("sample count does not match grid");
  for (std::size_t i = 1; i < samples_.size(); ++i)
    prefix_[i] = prefix_[i - 1] + 0.5 * (samples_[i - 1] + samples_[i]) * grid.step();
}

double CumulativeIntegral::up_to(double x) const {
  const Position p = locate(grid_, x);
  return prefix_[p.cell] + partial_cell(samples_, grid_, p);
}

}  // namespace slitwave
