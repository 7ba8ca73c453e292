#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmg/analysis.hpp"
#include "rmg/simulator.hpp"
#include "rmg/types.hpp"

namespace rmg {

/// Canonical capture layout: little-endian signed 16-bit I then Q per sample,
/// fast-time-major (sample index fastest, then chirp). File size must equal
/// M * N * 4 bytes for the given config.
ChirpCube read_capture(const std::filesystem::path& path,
                       const RadarConfig& config);

/// Inverse of read_capture. Sample components must round into int16 range;
/// the first offending sample is reported otherwise. Output bytes are
/// deterministic.
void write_capture(const ChirpCube& cube, const std::filesystem::path& path);

/// Radar config JSON (raw fields only; derived quantities recomputed on
/// load).
RadarConfig load_config(const std::filesystem::path& path);
void save_config(const RadarConfig& config,
                 const std::filesystem::path& path);

/// Simulation scenario: config + target motion + noise + seed.
struct Scenario {
  RadarConfig config;
  TargetTrajectory target;
  NoiseSpec noise;
  std::uint64_t seed = 0;
};

Scenario load_scenario(const std::filesystem::path& path);

/// EMG CSV with header `time_s,voltage_v` and a strictly increasing,
/// uniformly sampled time column. Parse errors report line numbers.
BiosignalTrace read_emg_csv(const std::filesystem::path& path);

/// Pipeline results CSV: columns slow_time_s,phase_rad,displacement_m, plus
/// emg_norm,phase_norm when an aligned pair is given. Re-running on identical
/// inputs produces identical bytes.
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<double>& slow_time_s,
                       const std::vector<double>& phase_rad,
                       const std::vector<double>& displacement_m,
                       const AlignedPair* aligned = nullptr);

struct ResultsTable {
  std::vector<double> slow_time_s;
  std::vector<double> phase_rad;
  std::vector<double> displacement_m;
  std::vector<double> emg_norm;    // empty when the column is absent
  std::vector<double> phase_norm;  // empty when the column is absent
};

ResultsTable read_results_csv(const std::filesystem::path& path);

/// Simulator ground truth CSV: slow_time_s,x_m,rbm_m,phi_rad.
void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<double>& slow_time_s,
                     const std::vector<double>& x_m,
                     const std::vector<double>& rbm_m,
                     const std::vector<double>& phi_rad);

/// Fit report JSON; aggregates are recomputed from the cycles on load.
void write_fit_report(const ExperimentFitReport& report,
                      const std::filesystem::path& path);
ExperimentFitReport read_fit_report(const std::filesystem::path& path);

/// Aggregate table as CSV and markdown.
void write_aggregate_csv(const std::vector<GroupAggregate>& rows,
                         const std::filesystem::path& path);
void write_aggregate_markdown(const std::vector<GroupAggregate>& rows,
                              const std::filesystem::path& path);
std::string aggregate_markdown(const std::vector<GroupAggregate>& rows);

}  // namespace rmg
