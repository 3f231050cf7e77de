#include "slitwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slitwave/error.hpp"

namespace slitwave {

namespace {

struct Unit {
  std::string_view name;
  double factor;
};

// Longest names first so "mm" wins over "m" and "kg" over "g".
constexpr Unit length_units[] = {{"micron", 1e-6}, {"µm", 1e-6}, {"um", 1e-6}, {"cm", 1e-2},
                                 {"mm", 1e-3},     {"nm", 1e-9}, {"pm", 1e-12}, {"m", 1.0}};
constexpr Unit time_units[] = {{"µs", 1e-6}, {"us", 1e-6}, {"ms", 1e-3}, {"ns", 1e-9}, {"s", 1.0}};
constexpr Unit wavenumber_units[] = {{"1/µm", 1e6}, {"1/um", 1e6}, {"um^-1", 1e6}, {"1/nm", 1e9},
                                     {"nm^-1", 1e9}, {"1/mm", 1e3}, {"mm^-1", 1e3}, {"/µm", 1e6},
                                     {"/um", 1e6},   {"/nm", 1e9},  {"/mm", 1e3},   {"1/m", 1.0},
                                     {"m^-1", 1.0},  {"/m", 1.0}};
constexpr Unit mass_units[] = {{"amu", 1.66053906660e-27}, {"kg", 1.0}, {"Da", 1.66053906660e-27},
                               {"g", 1e-3}, {"u", 1.66053906660e-27}};

std::span<const Unit> units_for(Quantity kind) {
  switch (kind) {
    case Quantity::length: return length_units;
    case Quantity::time: return time_units;
    case Quantity::wavenumber: return wavenumber_units;
    case Quantity::mass: return mass_units;
    case Quantity::dimensionless: return {};
  }
  return {};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// factor := [sign] number [pi] | [sign] pi ; expr := factor (('*' | '/') factor)*
std::optional<double> parse_factor(std::string_view f) {
  f = trim(f);
  if (f.empty()) return std::nullopt;
  double sign = 1.0;
  if (f.front() == '-' || f.front() == '+') {
    if (f.front() == '-') sign = -1.0;
    f.remove_prefix(1);
  }
  double pi_factor = 1.0;
  if (f.size() >= 2 && f.substr(f.size() - 2) == "pi") {
    pi_factor = pi;
    f = trim(f.substr(0, f.size() - 2));
    if (f.empty()) return sign * pi_factor;
  }
  const std::string s(f);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return sign * v * pi_factor;
}

std::optional<double> parse_expression(std::string_view e) {
  e = trim(e);
  if (e.empty()) return std::nullopt;
  double value = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= e.size(); ++i) {
    // '*' or '/' separate factors, except a '-'/'+' exponent sign never reaches here.
    if (i == e.size() || e[i] == '*' || e[i] == '/') {
      const auto f = parse_factor(e.substr(start, i - start));
      if (!f) return std::nullopt;
      value = (op == '*') ? value * *f : value / *f;
      if (i < e.size()) op = e[i];
      start = i + 1;
    }
  }
  return value;
}

bool parse_bool(std::string_view v, std::string_view field) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail_validation(std::string(field) + ": expected true/false, got '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view v, Quantity kind, std::string_view field) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (auto item : split(v, ',')) out.push_back(parse_quantity(item, kind, field));
  return out;
}

GridSpec parse_grid(std::string_view v, Quantity kind, std::string_view field) {
  v = trim(v);
  if (v == "auto") return {};
  const auto parts = split(v, ':');
  if (parts.size() != 3)
    fail_validation(std::string(field) + ": expected 'auto' or start:stop:step, got '" + std::string(v) + "'");
  const double start = parse_quantity(parts[0], kind, field);
  const double stop = parse_quantity(parts[1], kind, field);
  const double step = parse_quantity(parts[2], kind, field);
  if (!(step > 0.0) || !(stop > start))
    fail_validation(std::string(field) + ": grid needs stop > start and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count < 2) fail_validation(std::string(field) + ": grid needs at least 2 points");
  return {false, start, step, count};
}

std::string field_name(std::string_view origin, std::string_view key) {
  return std::string(origin) + ": " + std::string(key);
}

}  // namespace

double parse_quantity(std::string_view text, Quantity kind, std::string_view field) {
  const auto t = trim(text);
  if (t.empty()) fail_validation(std::string(field) + ": empty value");
  for (const auto& u : units_for(kind)) {
    if (t.size() > u.name.size() && t.substr(t.size() - u.name.size()) == u.name) {
      const auto head = t.substr(0, t.size() - u.name.size());
      // the unit must not be glued to a longer word ("4pim" is not "4pi m")
      if (auto v = parse_expression(head)) return *v * u.factor;
    }
  }
  if (auto v = parse_expression(t)) return *v;
  // Split off a trailing unit-looking token for the diagnostic.
  std::size_t cut = t.size();
  while (cut > 0) {
    const unsigned char c = static_cast<unsigned char>(t[cut - 1]);
    if (std::isalpha(c) || c == '/' || c == '^' || c >= 0x80 || (c == '-' && cut < t.size())) --cut;
    else break;
  }
  const auto suffix = trim(t.substr(cut));
  if (!suffix.empty() && suffix != "pi" && parse_expression(t.substr(0, cut)))
    fail_validation(std::string(field) + ": unknown unit suffix '" + std::string(suffix) + "'");
  fail_validation(std::string(field) + ": malformed number '" + std::string(t) + "'");
}

ApertureSpec ExperimentConfig::aperture() const {
  if (two_slit) return ApertureSpec::two_slit(two_slit->delta1, two_slit->delta2, two_slit->d);
  return ApertureSpec(slits);
}

BeamParams ExperimentConfig::beam() const { return BeamParams(k, mass, diameter); }

std::vector<double> ExperimentConfig::times() const {
  if (!ts.empty()) return ts;
  std::vector<double> out;
  const double v = beam().velocity();
  for (double y : ys) out.push_back(y / v);
  return out;
}

void ExperimentConfig::validate() const {
  if (two_slit && !(two_slit->delta1 > 0.0 && two_slit->delta2 > 0.0))
    fail_validation("aperture: delta1 and delta2 must be positive");
  const auto ap = aperture();
  const auto b = beam();
  (void)ap;
  (void)b;
  if (ys.empty()) fail_validation("planes.y: at least one plane is required");
  for (double y : ys)
    if (!(y >= 0.0) || !std::isfinite(y)) fail_validation("planes.y: planes must be non-negative");
  for (double t : ts)
    if (!(t > 0.0) || !std::isfinite(t)) fail_validation("planes.t: times must be positive");
  if (!(x_options.tail_target > 0.0) || !(k_options.tail_target > 0.0))
    fail_validation("grid: tail targets must be positive");
  if (!(x_options.oversample > 0.0)) fail_validation("grid.x_oversample must be positive");
  if (!(k_options.oversample > 1.0)) fail_validation("grid.k_oversample must exceed 1");
  if (methods.empty()) fail_validation("propagation.methods: at least one method is required");
  if (spectrum == SpectrumChoice::analytic && !two_slit)
    fail_validation("propagation.spectrum: the analytic spectrum needs the delta1/delta2/d aperture");
  if (std::find(methods.begin(), methods.end(), Method::kirchhoff) != methods.end())
    propagation.validate();
  propagation.budget.validate();
}

std::string output_directory(const ExperimentConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv(output_dir_env); env && *env) return env;
  return ".";
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value,
                   std::string_view origin) {
  key = trim(key);
  value = trim(value);
  const auto f = field_name(origin, key);
  const auto ensure_two_slit = [&] {
    if (!c.two_slit) c.two_slit = TwoSlitShorthand{1e-6, 0.25e-6, 8e-6};
    c.slits.clear();
  };

  if (key == "aperture.delta1") {
    ensure_two_slit();
    c.two_slit->delta1 = parse_quantity(value, Quantity::length, f);
  } else if (key == "aperture.delta2") {
    ensure_two_slit();
    c.two_slit->delta2 = parse_quantity(value, Quantity::length, f);
  } else if (key == "aperture.d") {
    ensure_two_slit();
    c.two_slit->d = parse_quantity(value, Quantity::length, f);
  } else if (key == "aperture.slits") {
    c.two_slit.reset();
    c.slits.clear();
    for (auto item : split(value, ',')) {
      const auto ends = split(item, ':');
      if (ends.size() != 2) fail_validation(f + ": expected left:right pairs, got '" + std::string(item) + "'");
      c.slits.push_back({parse_quantity(ends[0], Quantity::length, f),
                         parse_quantity(ends[1], Quantity::length, f)});
    }
  } else if (key == "beam.k") {
    c.k = parse_quantity(value, Quantity::wavenumber, f);
  } else if (key == "beam.wavelength") {
    c.k = 2.0 * pi / parse_quantity(value, Quantity::length, f);
  } else if (key == "beam.mass") {
    c.mass = parse_quantity(value, Quantity::mass, f);
  } else if (key == "beam.diameter") {
    c.diameter = parse_quantity(value, Quantity::length, f);
  } else if (key == "planes.y") {
    c.ys = parse_list(value, Quantity::length, f);
  } else if (key == "planes.t") {
    c.ts = parse_list(value, Quantity::time, f);
  } else if (key == "grid.x") {
    c.x = parse_grid(value, Quantity::length, f);
  } else if (key == "grid.kx") {
    c.kx = parse_grid(value, Quantity::wavenumber, f);
  } else if (key == "grid.x_tail") {
    c.x_options.tail_target = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "grid.x_oversample") {
    c.x_options.oversample = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "grid.x_resolve_fringes") {
    c.x_options.resolve_fringes = parse_bool(value, f);
  } else if (key == "grid.k_tail") {
    c.k_options.tail_target = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "grid.k_oversample") {
    c.k_options.oversample = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "propagation.methods") {
    c.methods.clear();
    for (auto m : split(value, ',')) {
      try {
        c.methods.push_back(parse_method(m));
      } catch (const Error& e) {
        fail_validation(f + ": " + e.what());
      }
    }
  } else if (key == "propagation.spectrum") {
    if (value == "auto") c.spectrum = SpectrumChoice::automatic;
    else if (value == "analytic") c.spectrum = SpectrumChoice::analytic;
    else if (value == "numeric") c.spectrum = SpectrumChoice::numeric;
    else fail_validation(f + ": expected auto, analytic or numeric, got '" + std::string(value) + "'");
  } else if (key == "propagation.source_distance") {
    c.propagation.source_distance = parse_quantity(value, Quantity::length, f);
  } else if (key == "propagation.source_amplitude") {
    c.propagation.source_amplitude = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "propagation.rescale_to_unit_mass") {
    c.propagation.rescale_to_unit_mass = parse_bool(value, f);
  } else if (key == "propagation.write_complex") {
    c.write_complex = parse_bool(value, f);
  } else if (key == "propagation.phase_step") {
    c.propagation.budget.target_phase_step = parse_quantity(value, Quantity::dimensionless, f);
  } else if (key == "propagation.rule_order") {
    c.propagation.budget.rule_order = static_cast<int>(parse_quantity(value, Quantity::dimensionless, f));
  } else if (key == "propagation.max_nodes") {
    c.propagation.budget.max_nodes =
        static_cast<std::size_t>(parse_quantity(value, Quantity::dimensionless, f));
  } else if (key == "arrival.renormalize") {
    c.renormalize = parse_bool(value, f);
  } else if (key == "output.dir") {
    c.output_dir = std::string(value);
  } else {
    fail_validation(std::string(origin) + ": unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view source_name) {
  ExperimentConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = std::string(source_name) + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) fail_validation(origin + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_validation(origin + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) fail_validation(origin + ": missing key");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    apply_setting(config, full, line.substr(eq + 1), origin);
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail_validation(path + ": invalid JSON: " + e.what());
    }
    return config_from_json(j.contains("config") ? j.at("config") : j);
  }
  return parse_config(text, path);
}

namespace {

nlohmann::json grid_json(const GridSpec& g) {
  if (g.automatic) return "auto";
  return {{"start", g.start}, {"step", g.step}, {"count", g.count}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "auto") return {};
  return {false, j.at("start").get<double>(), j.at("step").get<double>(), j.at("count").get<std::size_t>()};
}

std::string spectrum_name(SpectrumChoice s) {
  switch (s) {
    case SpectrumChoice::analytic: return "analytic";
    case SpectrumChoice::numeric: return "numeric";
    case SpectrumChoice::automatic: break;
  }
  return "auto";
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json aperture;
  if (c.two_slit) {
    aperture["delta1"] = c.two_slit->delta1;
    aperture["delta2"] = c.two_slit->delta2;
    aperture["d"] = c.two_slit->d;
  } else {
    auto& slits = aperture["slits"] = nlohmann::json::array();
    for (const auto& s : c.slits) slits.push_back({s.x_left, s.x_right});
  }
  std::vector<std::string> methods;
  for (auto m : c.methods) methods.emplace_back(to_string(m));
  return {
      {"aperture", aperture},
      {"beam", {{"k", c.k}, {"mass", c.mass}, {"diameter", c.diameter}}},
      {"planes", {{"y", c.ys}, {"t", c.ts}}},
      {"grid",
       {{"x", grid_json(c.x)},
        {"kx", grid_json(c.kx)},
        {"x_tail", c.x_options.tail_target},
        {"x_oversample", c.x_options.oversample},
        {"x_resolve_fringes", c.x_options.resolve_fringes},
        {"k_tail", c.k_options.tail_target},
        {"k_oversample", c.k_options.oversample}}},
      {"propagation",
       {{"methods", methods},
        {"spectrum", spectrum_name(c.spectrum)},
        {"source_distance", c.propagation.source_distance},
        {"source_amplitude", c.propagation.source_amplitude},
        {"rescale_to_unit_mass", c.propagation.rescale_to_unit_mass},
        {"write_complex", c.write_complex},
        {"phase_step", c.propagation.budget.target_phase_step},
        {"rule_order", c.propagation.budget.rule_order},
        {"max_nodes", c.propagation.budget.max_nodes}}},
      {"arrival", {{"renormalize", c.renormalize}}},
      {"output", {{"dir", c.output_dir}}},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    const auto& ap = j.at("aperture");
    if (ap.contains("slits")) {
      c.two_slit.reset();
      for (const auto& s : ap.at("slits")) c.slits.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    } else {
      c.two_slit = TwoSlitShorthand{ap.at("delta1").get<double>(), ap.at("delta2").get<double>(),
                                    ap.at("d").get<double>()};
    }
    const auto& beam = j.at("beam");
    c.k = beam.at("k").get<double>();
    c.mass = beam.at("mass").get<double>();
    c.diameter = beam.at("diameter").get<double>();
    c.ys = j.at("planes").at("y").get<std::vector<double>>();
    c.ts = j.at("planes").at("t").get<std::vector<double>>();
    const auto& g = j.at("grid");
    c.x = grid_from_json(g.at("x"));
    c.kx = grid_from_json(g.at("kx"));
    c.x_options.tail_target = g.at("x_tail").get<double>();
    c.x_options.oversample = g.at("x_oversample").get<double>();
    c.x_options.resolve_fringes = g.at("x_resolve_fringes").get<bool>();
    c.k_options.tail_target = g.at("k_tail").get<double>();
    c.k_options.oversample = g.at("k_oversample").get<double>();
    const auto& p = j.at("propagation");
    c.methods.clear();
    for (const auto& m : p.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    apply_setting(c, "propagation.spectrum", p.at("spectrum").get<std::string>(), "json");
    c.propagation.source_distance = p.at("source_distance").get<double>();
    c.propagation.source_amplitude = p.at("source_amplitude").get<double>();
    c.propagation.rescale_to_unit_mass = p.at("rescale_to_unit_mass").get<bool>();
    c.write_complex = p.at("write_complex").get<bool>();
    c.propagation.budget.target_phase_step = p.at("phase_step").get<double>();
    c.propagation.budget.rule_order = p.at("rule_order").get<int>();
    c.propagation.budget.max_nodes = p.at("max_nodes").get<std::size_t>();
    c.renormalize = j.at("arrival").at("renormalize").get<bool>();
    c.output_dir = j.at("output").at("dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("sidecar config: ") + e.what());
  }
  return c;
}

}  // namespace slitwave
