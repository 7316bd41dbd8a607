#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgn/config.hpp"
#include "mgn/errors.hpp"
#include "mgn/io_store.hpp"
#include "mgn/multipliers.hpp"
#include "mgn/simulation.hpp"
#include "mgn/stability.hpp"

namespace fs = std::filesystem;
using namespace mgn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitBlowUp = 3;

struct Options {
  std::string config;
  std::string out;
  std::string multiplier;
  std::string preset;
  bool force = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Experiment config (key = value)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--force", o.force, "Overwrite an existing run directory");
  cmd->add_option("--multiplier", o.multiplier, "id | reg | imp | custom:<path>");
  cmd->add_option("--preset", o.preset, "fig1 | fig2 | fig3 | fig4 | table1")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "table1"}));
}

ExperimentConfig base_config(const Options& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.multiplier.empty()) {
    c.multiplier = o.multiplier;
    c.validate();
  }
  return c;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4e", x);
  return buf;
}

int report_run(const RunResult& r, const std::string& label) {
  std::cout << label << ": " << to_string(r.status) << " at t = " << r.t << " ("
            << r.stats.accepted << " steps, " << r.stats.rejected << " rejected, "
            << r.cg_iterations << " CG iterations, " << r.wall_seconds << " s)\n";
  if (!r.message.empty()) std::cout << "  " << r.message << '\n';
  switch (r.status) {
    case RunStatus::Completed: return kExitOk;
    case RunStatus::BlowUp: return kExitBlowUp;
    case RunStatus::Cancelled: return kExitRuntime;
  }
  return kExitRuntime;
}

fs::path require_out(const Options& o) {
  if (o.out.empty()) throw CLI::ValidationError("--out", "an output directory is required");
  return o.out;
}

// ---- diag-compare -------------------------------------------------------

struct Drift {
  std::string label;
  std::string status;
  double t = 0.0;
  double dZ = 0.0, dV = 0.0, dI = 0.0, dH = 0.0, dM = 0.0;
};

Drift drift_of(const fs::path& dir, const std::string& label) {
  const CsvTable table = read_csv(dir / kDiagName);
  const auto& t = table.column("t");
  if (t.empty()) throw IoError("no diagnostics rows in '" + dir.string() + "'");
  Drift d;
  d.label = label;
  d.t = t.back();
  auto diff = [&](const char* name) {
    const auto& col = table.column(name);
    return col.back() - col.front();
  };
  d.dZ = diff("Z");
  d.dV = diff("V");
  d.dI = diff("I");
  d.dH = diff("H");
  d.dM = diff("M");
  d.status = "?";
  std::ifstream manifest(dir / kManifestName);
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.rfind("status = ", 0) == 0) d.status = line.substr(9);
  }
  return d;
}

void print_drift_table(std::ostream& out, const std::vector<Drift>& rows) {
  out << "run,status,t,dZ,dV,dI,dH,dM\n";
  for (const auto& d : rows) {
    out << d.label << ',' << d.status << ',' << fmt(d.t) << ',' << fmt(d.dZ) << ','
        << fmt(d.dV) << ',' << fmt(d.dI) << ',' << fmt(d.dH) << ',' << fmt(d.dM) << '\n';
  }
}

void print_drift_summary(const std::vector<Drift>& rows) {
  std::printf("%-14s %-10s %-8s %-12s %-12s %-12s %-12s\n", "run", "status", "t", "dZ", "dV",
              "dI", "dH");
  for (const auto& d : rows) {
    std::printf("%-14s %-10s %-8.4g %-12s %-12s %-12s %-12s\n", d.label.c_str(),
                d.status.c_str(), d.t, short_fmt(d.dZ).c_str(), short_fmt(d.dV).c_str(),
                short_fmt(d.dI).c_str(), short_fmt(d.dH).c_str());
  }
}

// ---- presets -------------------------------------------------------------

struct PresetRun {
  std::string label;
  ExperimentConfig config;
};

std::vector<PresetRun> preset_runs(const std::string& preset, const ExperimentConfig& base) {
  std::vector<PresetRun> runs;
  auto add = [&](const std::string& label, const std::string& multiplier, double t_end,
                 double inv_bond) {
    ExperimentConfig c = base;
    c.multiplier = multiplier;
    c.t_end = t_end;
    c.params.inv_bond = inv_bond;
    c.snapshot_times = {t_end};
    c.validate();
    runs.push_back({label, c});
  };
  const double bo = base.params.inv_bond > 0.0 ? base.params.inv_bond : 5e-4;
  if (preset == "fig2" || preset == "fig3") {
    const double t = preset == "fig2" ? 2.0 : 3.0;
    for (const char* m : {"id", "reg", "imp"}) add(m, m, t, bo);
  } else if (preset == "fig4") {
    for (const char* m : {"id", "reg", "imp"}) add(m, m, 2.0, 0.0);
  } else if (preset == "table1") {
    for (const char* m : {"id", "reg", "imp"}) add(std::string("st_") + m, m, 2.0, bo);
    for (const char* m : {"id", "reg", "imp"}) add(std::string("nost_") + m, m, 2.0, 0.0);
  }
  return runs;
}

int run_preset(const std::string& preset, const Options& o) {
  const fs::path out = require_out(o);
  const ExperimentConfig base = base_config(o);
  const auto runs = preset_runs(preset, base);
  std::vector<Drift> drifts;
  int code = kExitOk;
  for (const auto& run : runs) {
    const fs::path dir = out / run.label;
    const RunResult r = run_to_directory(run.config, dir, o.force, "simulate --preset " + preset);
    const int rc = report_run(r, run.label);
    // Blow-up is an expected outcome for the original model; only real errors fail the preset.
    if (rc != kExitOk && rc != kExitBlowUp) code = rc;
    drifts.push_back(drift_of(dir, run.label));
  }
  if (preset == "table1") {
    std::ofstream csv(out / "table1.csv");
    print_drift_table(csv, drifts);
    if (!csv) throw IoError("cannot write table1.csv");
    print_drift_summary(drifts);
  }
  return code;
}

// ---- subcommands ---------------------------------------------------------

int cmd_simulate(const Options& o, bool sv) {
  if (!o.preset.empty()) {
    if (sv || o.preset == "fig1") {
      throw CLI::ValidationError("--preset", o.preset + " is not a simulation preset here");
    }
    return run_preset(o.preset, o);
  }
  ExperimentConfig c = base_config(o);
  if (sv) c.model = ModelKind::SaintVenant;
  const RunResult r = run_to_directory(c, require_out(o), o.force, sv ? "sv" : "simulate");
  return report_run(r, sv ? "sv" : c.multiplier);
}

int cmd_stability(const Options& o) {
  if (!o.preset.empty() && o.preset != "fig1") {
    throw CLI::ValidationError("--preset", "stability only supports fig1");
  }
  ExperimentConfig c = base_config(o);
  if (o.preset == "fig1") c = ExperimentConfig{};
  const MultiplierSpec reg = c.theta_natural
                                 ? MultiplierSpec::regularized_natural(c.params.delta)
                                 : MultiplierSpec::regularized(c.theta1, c.theta2);
  const auto k = linspace(c.k_min, c.k_max, c.k_count);
  if (o.out.empty()) {
    write_threshold_csv(std::cout, k, c.params, reg);
    return kExitOk;
  }
  const fs::path dir = o.out;
  prepare_run_directory(dir, o.force);
  write_text_file(dir / kConfigName, serialize_config(c));
  std::ostringstream csv;
  write_threshold_csv(csv, k, c.params, reg);
  write_text_file(dir / "stability.csv", csv.str());
  ManifestInfo info;
  info.command = "stability";
  info.status = "completed";
  write_manifest(dir, info);
  std::cout << "wrote " << (dir / "stability.csv").string() << " (" << k.size() << " rows)\n";
  return kExitOk;
}

int cmd_admissibility(const Options& o) {
  const ExperimentConfig c = base_config(o);
  const MultiplierSpec spec = c.multiplier_spec();
  std::ostringstream text;
  bool ok = true;
  for (Layer layer : {Layer::Upper, Layer::Lower}) {
    const auto report = check_admissibility(spec, layer, c.params.mu, c.params.delta,
                                            c.admissibility_k_max, c.admissibility_samples);
    text << format_report(report, spec, layer) << '\n';
    ok = ok && report.admissible();
  }
  std::cout << text.str();
  if (!o.out.empty()) {
    const fs::path dir = o.out;
    prepare_run_directory(dir, o.force);
    write_text_file(dir / kConfigName, serialize_config(c));
    write_text_file(dir / "admissibility.txt", text.str());
    ManifestInfo info;
    info.command = "admissibility";
    info.status = ok ? "admissible" : "not_admissible";
    write_manifest(dir, info);
  }
  return kExitOk;
}

int cmd_diag_compare(const std::vector<std::string>& dirs, const std::string& out) {
  std::vector<Drift> rows;
  for (const auto& d : dirs) rows.push_back(drift_of(d, fs::path(d).filename().string()));
  if (out.empty()) {
    print_drift_table(std::cout, rows);
  } else {
    std::ostringstream csv;
    print_drift_table(csv, rows);
    write_text_file(out, csv.str());
    print_drift_summary(rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modified two-layer Green-Naghdi simulator and stability analyzer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MGN_VERSION_STRING);

  Options sim_opts, sv_opts, stab_opts, adm_opts;
  auto* sim = app.add_subcommand("simulate", "Run a Green-Naghdi simulation");
  add_common(sim, sim_opts);
  auto* sv = app.add_subcommand("sv", "Run the Saint-Venant (mu = 0) system");
  add_common(sv, sv_opts);
  auto* stab = app.add_subcommand("stability", "Kelvin-Helmholtz threshold curves as CSV");
  add_common(stab, stab_opts);
  auto* adm = app.add_subcommand("admissibility", "Admissibility report for a multiplier");
  add_common(adm, adm_opts);

  std::vector<std::string> compare_dirs;
  std::string compare_out;
  auto* cmp = app.add_subcommand("diag-compare", "Conserved-quantity drift of finished runs");
  cmp->add_option("runs", compare_dirs, "Run directories")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--out", compare_out, "Write the drift table to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_opts, false);
    if (*sv) return cmd_simulate(sv_opts, true);
    if (*stab) return cmd_stability(stab_opts);
    if (*adm) return cmd_admissibility(adm_opts);
    if (*cmp) return cmd_diag_compare(compare_dirs, compare_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid value for " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
