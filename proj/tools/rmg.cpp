// rmg: radar micro-motion pipeline CLI.
//
// Subcommands:
//   simulate  scenario.json -> capture.bin + ground-truth CSV
//   process   capture(s) -> phase/displacement results + report JSON
//   fit       results.csv + emg.csv -> per-cycle fit report JSON
//   report    fit reports -> aggregate table (CSV + markdown)
//
// Exit codes: 0 success, 2 usage, 3 data, 4 numeric non-convergence.

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"
#include "rmg/pipeline.hpp"
#include "rmg/radar_io.hpp"
#include "rmg/simulator.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNonConvergence = 4;

struct UsageError : rmg::Error {
  using Error::Error;
};

std::optional<rmg::RangeWindow> parse_range_window(const std::string& text) {
  if (text.empty()) return {};
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--range-window expects LO:HI in meters, got \"" + text +
                     "\"");
  }
  try {
    rmg::RangeWindow window;
    window.lo_m = std::stod(text.substr(0, colon));
    window.hi_m = std::stod(text.substr(colon + 1));
    if (!(window.lo_m <= window.hi_m)) {
      throw UsageError("--range-window: LO must not exceed HI");
    }
    return window;
  } catch (const std::invalid_argument&) {
    throw UsageError("--range-window expects numeric LO:HI, got \"" + text +
                     "\"");
  }
}

rmg::WindowType parse_window(const std::string& name) {
  if (name == "rect") return rmg::WindowType::kRect;
  if (name == "hann") return rmg::WindowType::kHann;
  throw UsageError("--window must be rect or hann, got \"" + name + "\"");
}

rmg::DetrendMode parse_detrend(const std::string& name) {
  if (name == "none") return rmg::DetrendMode::kNone;
  if (name == "linear") return rmg::DetrendMode::kLinear;
  throw UsageError("--detrend must be none or linear, got \"" + name + "\"");
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 const std::string& truth_path_arg,
                 std::optional<std::uint64_t> seed_override) {
  rmg::Scenario scenario = rmg::load_scenario(scenario_path);
  if (seed_override) scenario.seed = *seed_override;

  const rmg::ChirpCube cube = rmg::synthesize_cube(
      scenario.config, scenario.target, scenario.noise, scenario.seed);
  rmg::write_capture(cube, out_path);

  std::filesystem::path truth_path = truth_path_arg;
  if (truth_path_arg.empty()) {
    truth_path = std::filesystem::path(out_path);
    truth_path.replace_extension();
    truth_path += "_truth.csv";
  }

  const std::size_t m = scenario.config.chirps_per_capture;
  std::vector<double> t(m), x(m), rbm(m), phi(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = static_cast<double>(i) * scenario.config.chirp_repetition_period_s;
    x[i] = scenario.target.motion ? scenario.target.motion(t[i]) : 0.0;
    rbm[i] = scenario.target.rbm ? scenario.target.rbm(t[i]) : 0.0;
    phi[i] = 4.0 * rmg::kPi * scenario.target.range_m /
                 scenario.config.start_wavelength_m +
             4.0 * rmg::kPi * (x[i] + rbm[i]) /
                 scenario.config.center_wavelength_m +
             scenario.target.initial_phase_rad;
  }
  rmg::write_truth_csv(truth_path, t, x, rbm, phi);

  std::cout << "wrote " << out_path << " (" << m << " chirps x "
            << scenario.config.samples_per_chirp << " samples, seed "
            << scenario.seed << ") and " << truth_path.string() << "\n";
  return 0;
}

void write_process_report(const rmg::ProcessResult& result,
                          const std::filesystem::path& path) {
  // Small JSON sidecar; stages listed in execution order.
  std::string stages = "[\"range_fft\", \"select_range_bin\", "
                       "\"extract_range_bin_signal\", ";
  if (result.dc_corrected) stages += "\"dc_correct\", ";
  stages += "\"arctangent_demodulate\", \"unwrap\"";
  if (result.detrend == rmg::DetrendMode::kLinear) stages += ", \"detrend\"";
  stages += ", \"phase_to_displacement\"]";

  std::ofstream out(path);
  if (!out) throw rmg::DataError("cannot open " + path.string());
  out << "{\n"
      << "  \"format_version\": 1,\n"
      << "  \"selected_bin\": " << result.selected_bin << ",\n"
      << "  \"nominal_range_m\": " << result.nominal_range_m << ",\n"
      << "  \"dc_corrected\": " << (result.dc_corrected ? "true" : "false")
      << ",\n"
      << "  \"window\": \""
      << (result.window == rmg::WindowType::kHann ? "hann" : "rect") << "\",\n"
      << "  \"detrend\": \""
      << (result.detrend == rmg::DetrendMode::kLinear ? "linear" : "none")
      << "\",\n"
      << "  \"stages\": " << stages << ",\n"
      << "  \"velocity_budget\": {\"flag_count\": "
      << result.velocity.flag_count
      << ", \"worst_step_m\": " << result.velocity.worst_step_m
      << ", \"step_limit_m\": " << result.velocity.step_limit_m << "}\n"
      << "}\n";
}

int cmd_process(const std::string& config_path,
                const std::vector<std::string>& captures,
                std::string out_prefix, const std::string& range_window,
                const std::string& window_name, bool no_dc_correct,
                const std::string& detrend_name, unsigned jobs) {
  const rmg::RadarConfig config = rmg::load_config(config_path);

  rmg::ProcessOptions options;
  options.range_window = parse_range_window(range_window);
  options.window = parse_window(window_name);
  options.dc_correct = !no_dc_correct;
  options.detrend = parse_detrend(detrend_name);

  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::string> errors;

  auto worker = [&]() {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= captures.size()) return;
      const std::string& capture_path = captures[index];
      try {
        std::string prefix = out_prefix;
        if (prefix.empty()) {
          prefix = std::filesystem::path(capture_path)
                       .replace_extension()
                       .string();
        } else if (captures.size() > 1) {
          prefix += "_" + std::filesystem::path(capture_path)
                              .stem()
                              .string();
        }
        const rmg::ChirpCube cube = rmg::read_capture(capture_path, config);
        const rmg::ProcessResult result = rmg::process_capture(cube, options);
        rmg::write_results_csv(prefix + "_results.csv",
                               result.phase.slow_time_axis_s,
                               result.phase.values_rad, result.displacement_m);
        write_process_report(result, prefix + "_report.json");
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cout << capture_path << ": selected bin " << result.selected_bin
                  << " (nominal range " << result.nominal_range_m << " m), "
                  << result.phase.values_rad.size() << " chirps -> " << prefix
                  << "_results.csv\n";
        if (result.velocity.flag_count > 0) {
          std::cerr << "warning: " << result.velocity.flag_count
                    << " slow-time steps exceed the velocity budget\n";
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io_mutex);
        errors.push_back(capture_path + ": " + e.what());
        failed = true;
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(jobs, captures.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (const std::string& message : errors) {
    std::cerr << "error: " << message << "\n";
  }
  return failed ? kExitData : 0;
}

int cmd_fit(const std::string& results_path, const std::string& emg_path,
            const std::string& out_path, const rmg::FitOptions& options) {
  const rmg::ResultsTable results = rmg::read_results_csv(results_path);
  if (results.slow_time_s.empty()) {
    throw rmg::DataError(results_path + ": no rows");
  }
  const rmg::BiosignalTrace emg = rmg::read_emg_csv(emg_path);
  const rmg::ExperimentFitReport report = rmg::fit_experiment(
      results.slow_time_s, results.phase_rad, emg, options);
  rmg::write_fit_report(report, out_path);

  if (report.cycles.empty()) {
    std::cerr << "warning: no contraction cycles detected\n";
    std::cout << "wrote " << out_path << " (0 cycles)\n";
    return 0;
  }
  std::cout << "wrote " << out_path << ": " << report.cycles.size()
            << " cycles, " << report.n_converged << " converged";
  if (report.n_converged > 0) {
    std::cout << ", mean A = " << report.mean_a
              << ", mean B = " << report.mean_b
              << ", mean R2 = " << report.mean_r_squared;
  }
  std::cout << "\n";
  return report.n_converged == 0 ? kExitNonConvergence : 0;
}

int cmd_report(const std::vector<std::string>& report_paths,
               const std::string& out_prefix) {
  std::vector<rmg::ExperimentFitReport> reports;
  reports.reserve(report_paths.size());
  for (const std::string& path : report_paths) {
    reports.push_back(rmg::read_fit_report(path));
  }
  const std::vector<rmg::GroupAggregate> rows =
      rmg::aggregate_reports(reports);
  rmg::write_aggregate_csv(rows, out_prefix + ".csv");
  rmg::write_aggregate_markdown(rows, out_prefix + ".md");
  std::cout << rmg::aggregate_markdown(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FMCW radar micro-motion pipeline"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Synthesize a capture from a scenario JSON");
  std::string scenario_path, sim_out, sim_truth;
  std::uint64_t seed_value = 0;
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--out", sim_out, "Output capture file")->required();
  simulate->add_option("--truth", sim_truth,
                       "Ground-truth CSV (default <out>_truth.csv)");
  auto* seed_opt =
      simulate->add_option("--seed", seed_value, "Override the scenario seed");

  // process
  auto* process = app.add_subcommand(
      "process", "Recover phase and displacement from capture files");
  std::string config_path, out_prefix, range_window, window_name = "rect",
                                                     detrend_name = "none";
  std::vector<std::string> capture_paths;
  bool no_dc_correct = false;
  unsigned jobs = 1;
  process->add_option("--config", config_path, "Radar config JSON")
      ->required();
  process->add_option("captures", capture_paths, "Capture file(s)")
      ->required();
  process->add_option("--out-prefix", out_prefix,
                      "Output prefix (default: capture path)");
  process->add_option("--range-window", range_window,
                      "Restrict bin selection to LO:HI meters");
  process->add_option("--window", window_name, "Fast-time window: rect|hann");
  process->add_flag("--no-dc-correct", no_dc_correct,
                    "Skip the DC correction stage");
  process->add_option("--detrend", detrend_name,
                      "Phase detrend: none|linear");
  process->add_option("--jobs", jobs, "Parallel captures");

  // fit
  auto* fit = app.add_subcommand(
      "fit", "Fit the deformation-EMG model per contraction cycle");
  std::string results_path, emg_path, fit_out = "fit_report.json";
  rmg::FitOptions fit_options;
  double init_a = 0.0, init_b = 0.0;
  fit->add_option("--results", results_path, "Pipeline results CSV")
      ->required();
  fit->add_option("--emg", emg_path, "EMG CSV (time_s,voltage_v)")->required();
  fit->add_option("--out", fit_out, "Fit report JSON path");
  fit->add_option("--on-thresh", fit_options.on_thresh,
                  "Rising activation threshold");
  fit->add_option("--off-thresh", fit_options.off_thresh,
                  "Falling deactivation threshold");
  fit->add_option("--slope-thresh", fit_options.slope_thresh_per_s,
                  "Plateau slope threshold (1/s)");
  fit->add_option("--envelope-window", fit_options.envelope_window_s,
                  "EMG envelope RMS window in seconds; 0 skips conditioning");
  fit->add_option("--emg-offset", fit_options.emg_offset_s,
                  "Shift EMG timestamps by this many seconds");
  fit->add_flag("--per-cycle-norm", fit_options.per_cycle_norm,
                "Renormalize both channels inside each cycle");
  fit->add_option("--group", fit_options.group,
                  "Group label carried into the report");
  std::string fit_stage = "on";
  fit->add_option("--fit-stage", fit_stage,
                  "Cycle stage feeding the fit: on|hold|off");
  auto* init_a_opt = fit->add_option("--init-a", init_a, "Initial A");
  auto* init_b_opt = fit->add_option("--init-b", init_b, "Initial B");

  // report
  auto* report = app.add_subcommand(
      "report", "Aggregate fit reports into a per-group table");
  std::vector<std::string> report_paths;
  std::string report_prefix = "aggregate";
  report->add_option("reports", report_paths, "Fit report JSON files")
      ->required();
  report->add_option("--out-prefix", report_prefix,
                     "Output prefix for .csv/.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      std::optional<std::uint64_t> seed;
      if (!seed_opt->empty()) seed = seed_value;
      return cmd_simulate(scenario_path, sim_out, sim_truth, seed);
    }
    if (process->parsed()) {
      return cmd_process(config_path, capture_paths, out_prefix, range_window,
                         window_name, no_dc_correct, detrend_name, jobs);
    }
    if (fit->parsed()) {
      if (!(fit_options.off_thresh > 0.0 &&
            fit_options.off_thresh < fit_options.on_thresh &&
            fit_options.on_thresh < 1.0)) {
        throw UsageError("thresholds must satisfy 0 < --off-thresh < "
                         "--on-thresh < 1");
      }
      if (init_a_opt->empty() != init_b_opt->empty()) {
        throw UsageError("--init-a and --init-b must be given together");
      }
      if (!init_a_opt->empty()) {
        fit_options.init = rmg::FitInit{init_a, init_b};
      }
      if (fit_stage == "on") {
        fit_options.stage = rmg::FitStage::kOn;
      } else if (fit_stage == "hold") {
        fit_options.stage = rmg::FitStage::kHold;
      } else if (fit_stage == "off") {
        fit_options.stage = rmg::FitStage::kOff;
      } else {
        throw UsageError("--fit-stage must be on, hold or off");
      }
      return cmd_fit(results_path, emg_path, fit_out, fit_options);
    }
    if (report->parsed()) {
      return cmd_report(report_paths, report_prefix);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rmg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
