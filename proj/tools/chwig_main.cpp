//! chwig — command-line front end for the Cherenkov photon phase-space
//! library.  Subcommands select a scenario (or a bundled preset); the result
//! is a flag-annotated table written as CSV or JSON.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chwig/config.hpp"
#include "chwig/errors.hpp"
#include "chwig/sweep.hpp"
#include "chwig/version.hpp"
#include <chwig_presets.hpp>

namespace {

struct CliRun {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int jobs = 1;
  double tol = 1.0e-9;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CliRun& run, bool config_required) {
  auto* cfg = sub->add_option("--config", run.config_path,
                              "Scenario config file (key = value lines)");
  if (config_required) cfg->required();
  sub->add_option("--out", run.out_path,
                  "Output file (default: standard output)");
  sub->add_option("--format", run.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", run.jobs, "Worker threads (rows are computed "
                                      "in deterministic order regardless)")
      ->check(CLI::Range(1, 64));
  sub->add_option("--tol", run.tol, "Relative tolerance of the time "
                                    "integral quadrature");
  sub->add_option("--set", run.overrides,
                  "Override a config entry, e.g. --set sweep_count=100")
      ->take_all();
}

chwig::Config load_config(const CliRun& run, const std::string& preset,
                          const std::string& forced_scenario) {
  chwig::Config cfg;
  if (!run.config_path.empty()) {
    cfg = chwig::Config::from_file(run.config_path);
  } else if (!preset.empty()) {
    for (const auto& [name, text] : chwig::embedded::presets)
      if (name == preset) cfg = chwig::Config::from_string(std::string(text));
  }
  if (!forced_scenario.empty() && !cfg.has("scenario"))
    cfg.set("scenario", forced_scenario);
  for (const auto& kv : run.overrides) cfg.set_pair(kv);
  return cfg;
}

int execute(const CliRun& run, const std::string& preset,
            const std::string& forced_scenario) {
  const chwig::Config cfg = load_config(run, preset, forced_scenario);
  chwig::SweepOptions opt;
  opt.jobs = run.jobs;
  opt.rel_tol = run.tol;
  const chwig::ResultTable table = chwig::run_scenario(cfg, opt);

  const chwig::OutputFormat fmt = chwig::parse_format(run.format);
  std::ofstream file;
  if (!run.out_path.empty()) {
    file.open(run.out_path, std::ios::binary);
    if (!file) throw chwig::Error("cannot open output file: " + run.out_path);
  }
  std::ostream& out = run.out_path.empty() ? std::cout : file;
  if (fmt == chwig::OutputFormat::csv) chwig::write_csv(out, table);
  else chwig::write_json(out, table);
  out.flush();
  if (!out) throw chwig::Error("failed writing output");

  return table.any_not_converged() ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space observables of Cherenkov photon emission"};
  app.set_version_flag("--version",
                       std::string("chwig ") + chwig::version_string);
  app.require_subcommand(1);

  CliRun run;
  std::string preset;          // embedded preset name, when a figN subcommand
  std::string forced_scenario; // scenario implied by the subcommand

  auto* ts = app.add_subcommand(
      "timescales", "Sweep spreading/flash/angle scales over theta, n or "
                    "omega");
  add_common(ts, run, false);
  ts->callback([&] { forced_scenario = "timescales"; });

  auto* wg = app.add_subcommand(
      "wigner", "Scan the photon Wigner function over detection time");
  add_common(wg, run, false);
  wg->callback([&] { forced_scenario = "wigner_scan"; });

  const char* fig_help[] = {
      "Effective correlation radius vs observation direction (bundled "
      "preset)",
      "Characteristic time scales vs emission angle (bundled preset)",
      "Quantum arrival-time shift vs emission angle (bundled preset)",
      "Quantum arrival-time shift vs refractive index (bundled preset)"};
  const char* fig_names[] = {"fig2", "fig3", "fig4", "fig5"};
  for (int i = 0; i < 4; ++i) {
    auto* sub = app.add_subcommand(fig_names[i], fig_help[i]);
    add_common(sub, run, false);
    std::string name = fig_names[i];
    sub->callback([&preset, name] { preset = name; });
  }

  auto* val = app.add_subcommand(
      "validate", "Parse a config and evaluate its first row");
  add_common(val, run, true);
  val->callback([&] { forced_scenario = "__validate__"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (forced_scenario == "__validate__") {
      chwig::Config cfg = chwig::Config::from_file(run.config_path);
      for (const auto& kv : run.overrides) cfg.set_pair(kv);
      chwig::validate_scenario(cfg);
      std::cout << "ok: " << run.config_path << "\n";
      return 0;
    }
    return execute(run, preset, forced_scenario);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
