#include "slitwave/commands.hpp"

#include <algorithm>
#include <cmath>

#include "slitwave/error.hpp"
#include "slitwave/io.hpp"
#include "slitwave/profile.hpp"

namespace slitwave {

namespace {

double trapezoid_mass(std::span<const double> v, const Grid1D& g) {
  return integrate_smooth(v, g, g.start(), g.back());
}

nlohmann::json grid_json(const Grid1D& g) {
  return {{"start", g.start()}, {"step", g.step()}, {"count", g.count()}};
}

bool uses_spectrum(Method m) { return m == Method::angular_spectrum || m == Method::far_field; }

ComplexField propagate_one(const ExperimentConfig& config, Method method, double y, const Grid1D& xg,
                           const MomentumSpectrum* spectrum, const ComplexField* boundary) {
  const auto beam = config.beam();
  switch (method) {
    case Method::angular_spectrum: return propagate_angular_spectrum(*spectrum, beam, y, xg);
    case Method::far_field: return far_field_wavefunction(*spectrum, beam, y, xg);
    case Method::fresnel: return propagate_fresnel(*boundary, beam, y, xg, config.propagation.budget);
    case Method::kirchhoff: {
      auto pc = config.propagation;
      pc.method = Method::kirchhoff;
      return propagate_kirchhoff(*boundary, beam, pc, y, xg);
    }
  }
  fail_validation("unknown method");
}

std::string propagate_name(std::string_view prefix, Method m, double y) {
  return std::string(prefix) + "_" + std::string(to_string(m)) + "_y" + format_label(y) + "m.csv";
}

void write_field(const std::string& path, const ComplexField& field, bool with_complex) {
  const auto x = field.grid.points();
  const auto p = field.intensity();
  if (!with_complex) {
    write_csv_atomic(path, {"x", "abs2_psi"}, {x, p});
    return;
  }
  std::vector<double> re(p.size()), im(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    re[i] = field.values[i].real();
    im[i] = field.values[i].imag();
  }
  write_csv_atomic(path, {"x", "abs2_psi", "re", "im"}, {x, p, re, im});
}

nlohmann::json write_arrival(const std::string& path, const ArrivalDensity& a) {
  const auto x = a.grid.points();
  std::vector<std::string> header{"x", "p_total"};
  std::vector<std::span<const double>> cols{x, a.total};
  nlohmann::json slit_masses = nlohmann::json::array();
  for (std::size_t s = 0; s < a.per_slit.size(); ++s) {
    header.push_back("p_slit_" + std::to_string(s + 1));
    cols.emplace_back(a.per_slit[s]);
    slit_masses.push_back(trapezoid_mass(a.per_slit[s], a.grid));
  }
  write_csv_atomic(path, header, cols);
  return {{"time", a.time},
          {"grid", grid_json(a.grid)},
          {"mass", trapezoid_mass(a.total, a.grid)},
          {"slit_masses", slit_masses},
          {"passing_mask", a.passing_mask},
          {"renormalized", a.renormalized}};
}

// Two-slit geometry read off a general aperture, for the figure checks.
struct TwoSlitGeometry {
  double d;
  double wide;
  double narrow;
};

std::optional<TwoSlitGeometry> two_slit_geometry(const ApertureSpec& ap) {
  if (ap.size() != 2) return std::nullopt;
  return TwoSlitGeometry{ap[1].center() - ap[0].center(), std::max(ap[0].width(), ap[1].width()),
                         std::min(ap[0].width(), ap[1].width())};
}

nlohmann::json spacing_check(double measured, double expected) {
  const double rel = std::abs(measured - expected) / expected;
  return {{"measured", measured},
          {"expected", expected},
          {"relative_error", rel},
          {"tolerance", morphology_tolerance},
          {"pass", std::isfinite(rel) && rel < morphology_tolerance}};
}

}  // namespace

MomentumSpectrum config_spectrum(const ExperimentConfig& config, const Grid1D& kgrid, Execution exec) {
  const bool analytic = config.spectrum == SpectrumChoice::analytic ||
                        (config.spectrum == SpectrumChoice::automatic && config.two_slit);
  if (analytic) {
    if (!config.two_slit) fail_validation("the analytic spectrum needs the delta1/delta2/d aperture");
    const auto& s = *config.two_slit;
    return momentum_amplitude_analytic(s.delta1, s.delta2, s.d, kgrid, exec);
  }
  const auto ap = config.aperture();
  return momentum_amplitude_numeric(build_aperture_function(ap, boundary_grid(ap)), kgrid, exec);
}

Grid1D plane_grid(const ExperimentConfig& config, double y) {
  if (!config.x.automatic) return config.x.grid();
  const auto ap = config.aperture();
  if (y == 0.0) {
    const double edge = std::max(std::abs(ap.left_edge()), std::abs(ap.right_edge()));
    return Grid1D::symmetric(1.25 * edge, ap.min_width() / 64.0);
  }
  return auto_x_grid(ap, config.beam(), y, config.x_options);
}

Grid1D arrival_grid(const ExperimentConfig& config, double y) {
  if (!config.x.automatic) return config.x.grid();
  auto options = arrival_grid_options();
  options.oversample = config.x_options.oversample;
  return auto_x_grid(config.aperture(), config.beam(), y, options);
}

Grid1D propagation_spectrum_grid(const ExperimentConfig& config, const std::vector<double>& ys,
                                 const std::vector<Grid1D>& xgrids) {
  if (!config.kx.automatic) return config.kx.grid();
  return spectrum_grid_for_planes(config.aperture(), config.beam(), ys, xgrids, config.k_options);
}

CommandResult cmd_momentum(const ExperimentConfig& config) {
  config.validate();
  const auto ap = config.aperture();
  const Grid1D kg = config.kx.automatic ? auto_momentum_grid(ap, config.k_options) : config.kx.grid();
  const auto spec = config_spectrum(config, kg);
  const auto density = spec.density();
  std::vector<double> re(density.size()), im(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    re[i] = spec.values[i].real();
    im[i] = spec.values[i].imag();
  }
  const std::string dir = output_directory(config);
  const auto csv = output_path(dir, "momentum.csv");
  write_csv_atomic(csv, {"k_x", "re_c", "im_c", "abs2_c"}, {kg.points(), re, im, density});

  const double mass = trapezoid_mass(density, kg);
  const auto tail = estimate_tail_mass(spec);
  CommandResult result;
  result.files = {csv};
  result.sidecar = {{"command", "momentum"},
                    {"config", to_json(config)},
                    {"spectrum_source", to_string(spec.source)},
                    {"grid", grid_json(kg)},
                    {"mass", mass},
                    {"normalization_residual", mass - 1.0},
                    {"tail_estimate", {{"below", tail.below}, {"above", tail.above}}},
                    {"files", result.files}};
  write_json_atomic(output_path(dir, "momentum.json"), result.sidecar);
  return result;
}

CommandResult cmd_propagate(const ExperimentConfig& config) {
  config.validate();
  const auto ap = config.aperture();
  std::vector<Grid1D> xgrids;
  for (double y : config.ys) xgrids.push_back(plane_grid(config, y));

  std::optional<MomentumSpectrum> spectrum;
  std::optional<ComplexField> boundary;
  if (std::any_of(config.methods.begin(), config.methods.end(), uses_spectrum))
    spectrum = config_spectrum(config, propagation_spectrum_grid(config, config.ys, xgrids));
  if (!std::all_of(config.methods.begin(), config.methods.end(), uses_spectrum))
    boundary = build_aperture_function(ap, boundary_grid(ap));

  const std::string dir = output_directory(config);
  CommandResult result;
  nlohmann::json outputs = nlohmann::json::array();
  for (std::size_t p = 0; p < config.ys.size(); ++p) {
    for (Method m : config.methods) {
      const double y = config.ys[p];
      const auto field = propagate_one(config, m, y, xgrids[p], spectrum ? &*spectrum : nullptr,
                                       boundary ? &*boundary : nullptr);
      const auto path = output_path(dir, propagate_name("propagate", m, y));
      write_field(path, field, config.write_complex);
      result.files.push_back(path);
      outputs.push_back({{"file", path},
                         {"method", to_string(m)},
                         {"y", y},
                         {"fresnel_number", fresnel_number(ap.extent(), config.beam(), y)},
                         {"grid", grid_json(xgrids[p])},
                         {"mass", field.mass()}});
    }
  }
  result.sidecar = {{"command", "propagate"}, {"config", to_json(config)}, {"outputs", outputs}};
  if (spectrum)
    result.sidecar["spectrum"] = {{"source", to_string(spectrum->source)}, {"grid", grid_json(spectrum->grid)}};
  write_json_atomic(output_path(dir, "propagate.json"), result.sidecar);
  return result;
}

CommandResult cmd_arrival(const ExperimentConfig& config) {
  config.validate();
  const auto ap = config.aperture();
  const auto beam = config.beam();
  const Grid1D kg = config.kx.automatic ? auto_momentum_grid(ap, config.k_options) : config.kx.grid();
  const auto spec = config_spectrum(config, kg);

  const std::string dir = output_directory(config);
  CommandResult result;
  nlohmann::json outputs = nlohmann::json::array();
  for (double t : config.times()) {
    const double y = beam.velocity() * t;
    const auto density =
        arrival_density_blocked(spec, ap, beam, t, arrival_grid(config, y), config.renormalize);
    const auto path = output_path(dir, "arrival_t" + format_label(t) + "s.csv");
    auto meta = write_arrival(path, density);
    meta["file"] = path;
    meta["y"] = y;
    outputs.push_back(meta);
    result.files.push_back(path);
  }
  result.sidecar = {{"command", "arrival"},
                    {"config", to_json(config)},
                    {"spectrum", {{"source", to_string(spec.source)}, {"grid", grid_json(kg)}}},
                    {"diameter", beam.diameter()},
                    {"passing_mask", ap.passing_mask(beam.diameter())},
                    {"passing_fraction", passing_fraction(ap, beam.diameter())},
                    {"renormalized", config.renormalize},
                    {"outputs", outputs}};
  write_json_atomic(output_path(dir, "arrival.json"), result.sidecar);
  return result;
}

nlohmann::json cmd_compare(const std::string& file_a, const std::string& file_b,
                           const CompareOptions& options) {
  const auto a = read_csv(file_a);
  const auto b = read_csv(file_b);
  const auto pick = [](const CsvTable& t, const std::string& name, const std::string& file) {
    if (t.header.size() < 2) fail_validation(file + ": need an x column and a profile column");
    return name.empty() ? t.header[1] : name;
  };
  const std::string col_a = pick(a, options.column_a, file_a);
  const std::string col_b = pick(b, options.column_b, file_b);
  const auto& xa = a.columns.front();
  const auto& xb = b.columns.front();
  const auto& pa = a.column(col_a);
  const auto& pb_raw = b.column(col_b);
  if (xa.size() < 2 || xb.size() < 2) fail_validation("compare: profiles need at least two rows");

  const Grid1D grid(xa.front(), (xa.back() - xa.front()) / static_cast<double>(xa.size() - 1), xa.size());
  for (std::size_t i = 0; i < xa.size(); ++i)
    if (std::abs(xa[i] - grid.at(i)) > 1e-6 * grid.step())
      fail_validation("compare: " + file_a + " is not on a uniform grid");

  bool same = xa.size() == xb.size();
  for (std::size_t i = 0; same && i < xa.size(); ++i)
    same = std::abs(xa[i] - xb[i]) <= 1e-9 * grid.step();

  std::vector<double> pb;
  if (same) {
    pb = pb_raw;
  } else if (options.interpolate) {
    pb.resize(xa.size(), 0.0);
    for (std::size_t i = 0; i < xa.size(); ++i) {
      const double x = xa[i];
      if (x < xb.front() || x > xb.back()) continue;
      const auto it = std::upper_bound(xb.begin(), xb.end(), x);
      const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - xb.begin()), xb.size() - 1);
      const std::size_t j0 = j - 1;
      const double w = (x - xb[j0]) / (xb[j] - xb[j0]);
      pb[i] = (1.0 - w) * pb_raw[j0] + w * pb_raw[j];
    }
  } else {
    fail_validation("grid-mismatch: " + file_a + " and " + file_b +
                    " are on different x grids (use --interpolate)");
  }

  const auto na = normalized(pa, grid);
  const auto nb = normalized(pb, grid);
  const double distance = options.norm == Norm::l1 ? l1_distance(na, nb, grid) : linf_distance(na, nb);
  return {{"file_a", file_a},
          {"file_b", file_b},
          {"column_a", col_a},
          {"column_b", col_b},
          {"norm", options.norm == Norm::l1 ? "L1" : "Linf"},
          {"points", xa.size()},
          {"interpolated", !same},
          {"distance", distance},
          {"threshold", options.threshold},
          {"pass", distance < options.threshold}};
}

CommandResult cmd_reproduce_figures(const ExperimentConfig& config) {
  config.validate();
  const auto ap = config.aperture();
  const auto beam = config.beam();
  const double k0 = beam.k();
  const double y_far = far_field_threshold(ap.extent(), beam);
  const auto geom = two_slit_geometry(ap);
  const std::string dir = output_directory(config);
  CommandResult result;
  nlohmann::json report{{"command", "reproduce-figures"}, {"config", to_json(config)},
                        {"far_field_threshold", y_far}};
  bool checks_passed = true;

  // fig2: |psi|^2 at every plane.
  {
    std::vector<Grid1D> xgrids;
    for (double y : config.ys) xgrids.push_back(plane_grid(config, y));
    const auto spec = config_spectrum(config, propagation_spectrum_grid(config, config.ys, xgrids));
    for (std::size_t p = 0; p < config.ys.size(); ++p) {
      const auto field = propagate_angular_spectrum(spec, beam, config.ys[p], xgrids[p]);
      const auto path = output_path(dir, "fig2_y" + format_label(config.ys[p]) + "m.csv");
      write_field(path, field, false);
      result.files.push_back(path);
      report["fig2"].push_back({{"file", path}, {"y", config.ys[p]}, {"mass", field.mass()}});
    }
  }

  // fig3: |c|^2 over the central lobes, at the full-grid spacing.
  const Grid1D kfull = config.kx.automatic ? auto_momentum_grid(ap, config.k_options) : config.kx.grid();
  {
    const double window = std::min(2.0 * (2.0 * pi / ap.min_width()), kfull.back());
    const auto spec = config_spectrum(config, Grid1D::symmetric(window, kfull.step()));
    const auto density = spec.density();
    const auto path = output_path(dir, "fig3.csv");
    write_csv_atomic(path, {"k_x", "abs2_c"}, {spec.grid.points(), density});
    result.files.push_back(path);
    report["fig3"]["file"] = path;
    if (geom) {
      const double lobe = 2.0 * pi / geom->wide;
      const auto check = spacing_check(median_peak_spacing(density, spec.grid, -lobe, lobe),
                                       2.0 * pi / geom->d);
      checks_passed = checks_passed && check["pass"].get<bool>();
      report["fig3"]["fringe_spacing"] = check;
    }
  }

  // fig4 and fig5: arrival densities, unblocked and with the narrow slit blocked.
  const auto full_spec = config_spectrum(config, kfull);
  double diameter = config.diameter;
  if (!(diameter > 0.0) && geom)
    diameter = 2.0 * geom->narrow < geom->wide ? 2.0 * geom->narrow : 0.5 * (geom->narrow + geom->wide);
  const auto blocked_beam = beam.with_diameter(diameter);
  report["fig5_diameter"] = diameter;

  std::vector<double> far_ys;
  std::vector<Grid1D> far_grids;
  for (double y : config.ys) {
    if (y == 0.0) continue;
    const double t = y / beam.velocity();
    const auto xg = arrival_grid(config, y);
    const auto label = format_label(y);

    const auto p4 = arrival_density_slitsum(full_spec, ap, beam, t, xg);
    const auto path4 = output_path(dir, "fig4_y" + label + "m.csv");
    auto meta4 = write_arrival(path4, p4);
    meta4["file"] = path4;
    meta4["y"] = y;
    report["fig4"].push_back(meta4);
    result.files.push_back(path4);

    const auto p5 = arrival_density_blocked(full_spec, ap, blocked_beam, t, xg, false);
    const auto path5 = output_path(dir, "fig5_y" + label + "m.csv");
    auto meta5 = write_arrival(path5, p5);
    meta5["file"] = path5;
    meta5["y"] = y;
    report["fig5"]["planes"].push_back(meta5);
    result.files.push_back(path5);

    if (y >= y_far) {
      far_ys.push_back(y);
      far_grids.push_back(xg);
    }
  }

  // Far zone: distance between the normalized arrival density and |psi|^2.
  if (!far_ys.empty()) {
    const auto spec = config_spectrum(
        config, spectrum_grid_for_planes(ap, beam, far_ys, far_grids, config.k_options));
    for (std::size_t p = 0; p < far_ys.size(); ++p) {
      const double t = far_ys[p] / beam.velocity();
      const auto& xg = far_grids[p];
      const auto psi = propagate_angular_spectrum(spec, beam, far_ys[p], xg);
      const auto arrival = arrival_density_slitsum(full_spec, ap, beam, t, xg);
      report["fig4_far_l1"].push_back(
          {{"y", far_ys[p]},
           {"l1", l1_distance(normalized(arrival.total, xg), normalized(psi.intensity(), xg), xg)}});
    }
  }

  // fig5 morphology: the d-fringes survive single-slit transmission.
  if (geom && !far_ys.empty()) {
    const double y = far_ys.back();
    const double t = y / beam.velocity();
    const auto xg = arrival_grid(config, y);
    const auto p5 = arrival_density_blocked(full_spec, ap, blocked_beam, t, xg, false);
    double centre = 0.0;
    for (std::size_t s = 0; s < ap.size(); ++s)
      if (p5.passing_mask[s]) centre = ap[s].center();
    const double half = 2.0 * pi / geom->wide * y / k0;
    auto check = spacing_check(median_peak_spacing(p5.total, xg, centre - half, centre + half),
                               2.0 * pi * y / (k0 * geom->d));
    check["y"] = y;
    checks_passed = checks_passed && check["pass"].get<bool>();
    report["fig5"]["fringe_spacing"] = check;
  }

  report["checks_passed"] = checks_passed;
  report["files"] = result.files;
  write_json_atomic(output_path(dir, "figures.json"), report);
  result.sidecar = report;
  return result;
}

}  // namespace slitwave
