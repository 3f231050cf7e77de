#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slitwave/commands.hpp"
#include "slitwave/error.hpp"
#include "slitwave/io.hpp"

using namespace slitwave;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::numerical_budget: return 3;
    case ErrorKind::comparison: return 4;
    case ErrorKind::io: return 1;
  }
  return 1;
}

struct RunOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "config file (text, or a JSON sidecar)");
  cmd->add_option("-s,--set", opts.sets, "override, e.g. --set beam.diameter=0.5um")->take_all();
  cmd->add_option("-o,--out", opts.out, "output directory (default: $SLITWAVE_OUT, else .)");
}

ExperimentConfig resolve(const RunOptions& opts) {
  ExperimentConfig config = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  for (const auto& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_validation("--set " + s + ": expected section.key=value");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1), "--set");
  }
  if (!opts.out.empty()) config.output_dir = opts.out;
  return config;
}

void list_files(const CommandResult& r) {
  for (const auto& f : r.files) std::cout << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymmetric double-slit matter-wave simulator"};
  app.require_subcommand(1);

  RunOptions run;
  auto* momentum = app.add_subcommand("momentum", "transverse momentum distribution |c(k_x)|^2");
  auto* propagate = app.add_subcommand("propagate", "propagated |psi(x, y)|^2 per plane and method");
  auto* arrival = app.add_subcommand("arrival", "trajectory arrival density per time");
  auto* figures = app.add_subcommand("reproduce-figures", "figure data and morphology checks");
  for (auto* cmd : {momentum, propagate, arrival, figures}) add_run_options(cmd, run);

  auto* compare = app.add_subcommand("compare", "distance between two normalized profiles");
  std::string file_a, file_b, norm = "L1", column, report_path;
  CompareOptions cmp;
  compare->add_option("file_a", file_a)->required();
  compare->add_option("file_b", file_b)->required();
  compare->add_option("--norm", norm, "L1 or Linf")->check(CLI::IsMember({"L1", "Linf"}));
  compare->add_option("--column", column, "profile column in both files (default: second column)");
  compare->add_option("--column-a", cmp.column_a);
  compare->add_option("--column-b", cmp.column_b);
  compare->add_option("--threshold", cmp.threshold, "exit 4 unless distance < threshold");
  compare->add_flag("--interpolate", cmp.interpolate, "interpolate b onto a's grid");
  compare->add_option("--report", report_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compare) {
      cmp.norm = norm == "L1" ? Norm::l1 : Norm::linf;
      if (!column.empty()) {
        if (cmp.column_a.empty()) cmp.column_a = column;
        if (cmp.column_b.empty()) cmp.column_b = column;
      }
      const auto report = cmd_compare(file_a, file_b, cmp);
      if (!report_path.empty()) write_json_atomic(report_path, report);
      std::cout << report.dump(2) << "\n";
      if (!report["pass"].get<bool>()) {
        std::fprintf(stderr, "compare: distance %.6g is not below threshold %.6g\n",
                     report["distance"].get<double>(), cmp.threshold);
        return exit_code(ErrorKind::comparison);
      }
      return 0;
    }
    const auto config = resolve(run);
    if (*momentum) list_files(cmd_momentum(config));
    if (*propagate) list_files(cmd_propagate(config));
    if (*arrival) list_files(cmd_arrival(config));
    if (*figures) {
      const auto r = cmd_reproduce_figures(config);
      list_files(r);
      if (!r.sidecar["checks_passed"].get<bool>()) {
        std::fprintf(stderr, "reproduce-figures: morphology checks failed, see figures.json\n");
        return exit_code(ErrorKind::comparison);
      }
    }
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
