#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "slitwave/arrival.hpp"
#include "slitwave/config.hpp"
#include "slitwave/propagation.hpp"

namespace slitwave {

/// Files written by a command and the metadata stored in its JSON sidecar.
struct CommandResult {
  std::vector<std::string> files;
  nlohmann::json sidecar;
};

/// c(k_x) on `kgrid`, analytic or numeric as the config asks (automatic:
/// analytic for the two-slit shorthand, numeric for a slit list).
MomentumSpectrum config_spectrum(const ExperimentConfig& config, const Grid1D& kgrid,
                                 Execution exec = default_execution);

/// Detector grid for a propagated plane: explicit grid, else the automatic
/// rule. y = 0 gets a fine grid over the aperture.
Grid1D plane_grid(const ExperimentConfig& config, double y);

/// Detector grid for an arrival density at plane y = v t.
Grid1D arrival_grid(const ExperimentConfig& config, double y);

/// Spectrum grid feeding the angular-spectrum and far-field evaluators on the
/// given planes (explicit config grid if set).
Grid1D propagation_spectrum_grid(const ExperimentConfig& config, const std::vector<double>& ys,
                                 const std::vector<Grid1D>& xgrids);

CommandResult cmd_momentum(const ExperimentConfig& config);
CommandResult cmd_propagate(const ExperimentConfig& config);
CommandResult cmd_arrival(const ExperimentConfig& config);

enum class Norm { l1, linf };

struct CompareOptions {
  Norm norm = Norm::l1;
  std::string column_a;  // empty: second column
  std::string column_b;
  double threshold = 0.05;
  /// Linearly interpolate b onto a's grid (zero outside b's range) when the
  /// grids differ; otherwise a mismatch is an error.
  bool interpolate = false;
};

/// Distance between the normalized profiles of two CSV files. The report's
/// "pass" is distance < threshold; the caller decides what to do on failure.
nlohmann::json cmd_compare(const std::string& file_a, const std::string& file_b,
                           const CompareOptions& options);

/// Figures 2-5 data at the configured planes plus morphology checks, written
/// to figures.json; the result's sidecar carries "checks_passed".
CommandResult cmd_reproduce_figures(const ExperimentConfig& config);

/// Fringe spacing checks used by reproduce-figures and the acceptance suite.
inline constexpr double morphology_tolerance = 0.05;

}  // namespace slitwave
