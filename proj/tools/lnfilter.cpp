// lnfilter: simulate, analyze and fit lithium-niobate A1 ladder filters.
//
// Exit codes: 0 success, 2 invalid input (flags, config, file syntax),
// 3 numerical failure, 4 fit did not converge.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lnf/config.hpp"
#include "lnf/dispersion.hpp"
#include "lnf/error.hpp"
#include "lnf/fitting.hpp"
#include "lnf/ladder.hpp"
#include "lnf/metrics.hpp"
#include "lnf/report.hpp"
#include "lnf/svg_plot.hpp"
#include "lnf/touchstone.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUnconverged = 4;

// Raised for bad user input discovered after flag parsing.
struct UsageError : lnf::Error {
  using lnf::Error::Error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

std::vector<double> split_numbers(const std::string& text, std::size_t expected,
                                  const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw UsageError(flag + " expects " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

void write_plots(const lnf::SMatrix& s, const std::string& prefix) {
  std::vector<double> f_ghz(s.size()), s21_db(s.size()), gd_ns(s.size());
  const lnf::GroupDelay gd = lnf::group_delay(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    f_ghz[i] = s.grid()[i] * 1e-9;
    s21_db[i] = lnf::to_db(s[i].s21);
    gd_ns[i] = gd.seconds[i] * 1e9;
  }
  write_file(prefix + "_s21.svg",
             lnf::svg_line_chart(f_ghz, s21_db, {"|S21|", "Frequency (GHz)", "|S21| (dB)"}));
  write_file(prefix + "_gd.svg",
             lnf::svg_line_chart(f_ghz, gd_ns, {"Group delay", "Frequency (GHz)", "Delay (ns)"}));
}

struct SimulateArgs {
  std::string design;
  std::string config;
  std::string grid;
  std::string out;
};

int simulate(const SimulateArgs& a) {
  lnf::LadderDesign design;
  lnf::GridSpec grid = lnf::default_grid();
  std::string prefix = a.out;
  if (!a.config.empty()) {
    const lnf::RunConfig cfg = lnf::load_run_config(a.config);
    if (!cfg.design) throw lnf::ConfigError("config defines neither 'design' nor 'filter'");
    design = *cfg.design;
    if (cfg.grid) grid = *cfg.grid;
    if (prefix.empty() && cfg.output_prefix) prefix = *cfg.output_prefix;
  } else {
    design = lnf::design_by_name(a.design);
  }
  if (!a.grid.empty()) grid = lnf::parse_grid_arg(a.grid);
  if (prefix.empty()) prefix = a.config.empty() ? "design_" + a.design : "simulation";

  const lnf::SMatrix s = lnf::build_network(design.to_spec(), grid.make());
  const lnf::FilterMetrics m = lnf::analyze(s);

  write_file(prefix + ".s2p", lnf::write_touchstone(s, lnf::DataFormat::RI, lnf::FrequencyUnit::Hz,
                                                    {" lnfilter simulate"}));
  write_file(prefix + ".csv", lnf::export_csv(s, true));
  write_plots(s, prefix);
  std::cout << lnf::metrics_report(m);
  return kExitOk;
}

int metrics(const std::string& in, bool csv) {
  const lnf::TouchstoneData data = lnf::read_touchstone_file(in);
  const lnf::FilterMetrics m = lnf::analyze(data.matrix);
  std::cout << lnf::metrics_report(m);
  if (csv) std::cout << lnf::metrics_csv_header() << lnf::metrics_csv_row(m);
  return kExitOk;
}

int fit(const std::string& in, const std::string& config_path) {
  const lnf::TouchstoneData data = lnf::read_touchstone_file(in);
  const lnf::RunConfig cfg = lnf::load_run_config(config_path);
  if (!cfg.fit) throw lnf::ConfigError("fit config has no 'fit' section");
  const lnf::LadderDesign start = cfg.design ? *cfg.design : lnf::design_a();
  const lnf::FitJob& job = *cfg.fit;

  std::vector<double> weights;
  if (job.weighting == lnf::Weighting::Passband) {
    const lnf::FilterMetrics m = lnf::analyze(data.matrix);
    weights.resize(data.matrix.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double f = data.matrix.grid()[i];
      weights[i] = f >= m.passband.lo_hz && f <= m.passband.hi_hz ? 1.0 : 0.05;
    }
  }
  const lnf::FitProblem problem =
      lnf::ladder_fit_problem(data.matrix, start, job.free, job.bounds, weights);
  const lnf::FitResult result = lnf::fit_model(problem, job.options);

  const lnf::LadderDesign fitted = lnf::apply_fit(start, result);
  const lnf::SMatrix model = lnf::build_network(fitted.to_spec(), data.matrix.grid());
  const std::filesystem::path p(in);
  const std::filesystem::path out = p.parent_path() / (p.stem().string() + "_fit.s2p");
  write_file(out.string(), lnf::write_touchstone(model, data.document.format, data.document.unit,
                                                 {" lnfilter fit of " + p.filename().string()}));

  std::cout << lnf::fit_report(result);
  std::cout << "model_file=" << out.string() << "\n";
  if (!result.converged) {
    std::cerr << "fit did not converge (residual " << result.residual << " after "
              << result.iterations << " iterations)\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

int convert(const std::string& in, const std::string& format, const std::string& unit,
            const std::string& out) {
  const lnf::TouchstoneData data = lnf::read_touchstone_file(in);
  std::string text;
  if (format == "csv" || format == "CSV") {
    text = lnf::export_csv(data.matrix, true);
  } else {
    lnf::DataFormat f;
    lnf::FrequencyUnit u = data.document.unit;
    try {
      f = lnf::parse_format(format);
      if (!unit.empty()) u = lnf::parse_unit(unit);
    } catch (const lnf::InputError& e) {
      throw UsageError(e.what());
    }
    text = lnf::write_touchstone(data.matrix, f, u, data.document.comments);
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kExitOk;
}

int dispersion(const std::string& anchors, std::optional<double> target_fs,
               std::optional<double> gap) {
  const std::vector<double> v = split_numbers(anchors, 4, "--anchors");
  lnf::DispersionModel model;
  try {
    model = lnf::calibrate({v[0], v[1]}, {v[2], v[3]});
  } catch (const lnf::InputError& e) {
    throw UsageError(e.what());
  }
  std::printf("f_t_hz=%.12g\nc_lat_hz_um=%.12g\n", model.f_t_hz, model.c_lat_hz_um);
  if (target_fs) std::printf("gap_um=%.12g\n", model.gap_for_target(*target_fs));
  if (gap) std::printf("fs_hz=%.12g\n", model.fs_from_gap(*gap));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate, analyze and fit lithium-niobate A1 MEMS ladder filters"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Sweep a preset or configured ladder filter");
  auto* design_opt = sim_cmd->add_option("--design", sim.design, "Preset design")
                         ->check(CLI::IsMember({"A", "B", "a", "b"}));
  auto* config_opt = sim_cmd->add_option("--config", sim.config, "JSON run configuration");
  design_opt->excludes(config_opt);
  sim_cmd->add_option("--grid", sim.grid, "start,stop,n in Hz (default 3.5e9,5.5e9,2001)");
  sim_cmd->add_option("--out", sim.out, "Output prefix for .s2p/.csv/.svg files");

  std::string metrics_in;
  bool metrics_csv = false;
  auto* met_cmd = app.add_subcommand("metrics", "Report filter figures of merit of an .s2p file");
  met_cmd->add_option("--in", metrics_in, "Touchstone file")->required();
  met_cmd->add_flag("--csv", metrics_csv, "Also print a CSV header and row");

  std::string fit_in, fit_config;
  auto* fit_cmd = app.add_subcommand("fit", "Fit ladder parameters to a measured .s2p file");
  fit_cmd->add_option("--in", fit_in, "Touchstone file")->required();
  fit_cmd->add_option("--config", fit_config, "JSON fit configuration")->required();

  std::string conv_in, conv_format, conv_unit, conv_out;
  auto* conv_cmd = app.add_subcommand("convert", "Rewrite an .s2p file in another format");
  conv_cmd->add_option("--in", conv_in, "Touchstone file")->required();
  conv_cmd->add_option("--format", conv_format, "RI, MA, DB or csv")->required();
  conv_cmd->add_option("--unit", conv_unit, "Frequency unit of the output (Hz/kHz/MHz/GHz)");
  conv_cmd->add_option("--out", conv_out, "Output path (default stdout)");

  std::string anchors;
  std::optional<double> target_fs, gap;
  auto* disp_cmd = app.add_subcommand("dispersion", "Map electrode gap to resonance frequency");
  disp_cmd->add_option("--anchors", anchors, "g1,f1,g2,f2 (um, Hz)")->required();
  auto* tfs = disp_cmd->add_option("--target-fs", target_fs, "Resonance to reach (Hz)");
  auto* tg = disp_cmd->add_option("--gap", gap, "Electrode gap to evaluate (um)");
  tfs->excludes(tg);
  disp_cmd->callback([&] {
    if (!target_fs && !gap) throw CLI::ValidationError("one of --target-fs or --gap is required");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sim_cmd) {
      if (sim.design.empty() && sim.config.empty()) {
        throw UsageError("simulate needs --design or --config");
      }
      return simulate(sim);
    }
    if (*met_cmd) return metrics(metrics_in, metrics_csv);
    if (*fit_cmd) return fit(fit_in, fit_config);
    if (*conv_cmd) return convert(conv_in, conv_format, conv_unit, conv_out);
    if (*disp_cmd) return dispersion(anchors, target_fs, gap);
  } catch (const lnf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const lnf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const lnf::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const lnf::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
