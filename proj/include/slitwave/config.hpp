#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "slitwave/aperture.hpp"
#include "slitwave/propagation.hpp"

namespace slitwave {

enum class Quantity { length, time, wavenumber, mass, dimensionless };

/// Parse a scalar such as "0.25 um", "4pi*1e10", "3.8189e-26 kg" or "2 ms"
/// into SI. A bare number is taken as SI. Throws Error(validation) naming
/// `field` on a malformed number or an unknown unit suffix.
double parse_quantity(std::string_view text, Quantity kind, std::string_view field);

/// Explicit uniform grid "start:stop:step" or the automatic sizing rule.
struct GridSpec {
  bool automatic = true;
  double start = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  Grid1D grid() const { return Grid1D(start, step, count); }
};

enum class SpectrumChoice { automatic, analytic, numeric };

struct TwoSlitShorthand {
  double delta1;
  double delta2;
  double d;
};

/// Everything a run needs, in SI. Defaults are the reference two-slit setup.
struct ExperimentConfig {
  std::optional<TwoSlitShorthand> two_slit = TwoSlitShorthand{1e-6, 0.25e-6, 8e-6};
  std::vector<SlitInterval> slits;  // used when two_slit is empty

  double k = 4.0 * pi * 1e10;
  double mass = 3.8189e-26;
  double diameter = 0.0;

  std::vector<double> ys{1e-3, 1e-2, 60.0, 300.0};
  std::vector<double> ts;  // arrival times; empty means y / v per plane

  GridSpec x;
  GridSpec kx;
  XGridOptions x_options{};
  MomentumGridOptions k_options{};

  std::vector<Method> methods{Method::angular_spectrum};
  SpectrumChoice spectrum = SpectrumChoice::automatic;
  PropagationConfig propagation{};
  bool write_complex = false;

  bool renormalize = false;

  std::string output_dir;  // empty: $SLITWAVE_OUT, else "."

  ApertureSpec aperture() const;
  BeamParams beam() const;
  /// Arrival times: `ts` if given, else y / v for every plane.
  std::vector<double> times() const;
  /// Checks every module precondition that can be checked before running.
  void validate() const;
};

/// Name of the environment variable holding the default output directory.
inline constexpr const char* output_dir_env = "SLITWAVE_OUT";

/// Resolved output directory: config, then $SLITWAVE_OUT, then ".".
std::string output_directory(const ExperimentConfig& config);

/// Apply one "section.key = value" assignment. `origin` prefixes diagnostics
/// (e.g. "run.ini:12" or "--set").
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   std::string_view origin);

/// Parse the text format:
///
///   # comment
///   [aperture]
///   delta1 = 1 um
///
/// Keys are section.key; unknown keys are errors.
ExperimentConfig parse_config(std::string_view text, std::string_view source_name);

/// Load a text config, or the "config" object of a JSON sidecar (any file
/// whose first non-blank character is '{').
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace slitwave
