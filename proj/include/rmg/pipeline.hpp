#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmg/analysis.hpp"
#include "rmg/biosignal.hpp"
#include "rmg/phase_recovery.hpp"
#include "rmg/range_processing.hpp"
#include "rmg/types.hpp"

namespace rmg {

enum class DetrendMode { kNone, kLinear };

struct ProcessOptions {
  std::optional<RangeWindow> range_window;
  WindowType window = WindowType::kRect;
  bool dc_correct = true;
  DetrendMode detrend = DetrendMode::kNone;
};

struct ProcessResult {
  std::size_t selected_bin = 0;
  double nominal_range_m = 0.0;
  PhaseSignal phase;
  std::vector<double> displacement_m;
  VelocityBudgetReport velocity;
  bool dc_corrected = false;
  WindowType window = WindowType::kRect;
  DetrendMode detrend = DetrendMode::kNone;
};

/// Fixed stage order: range FFT -> bin selection -> extraction ->
/// DC correction -> arctangent demodulation -> unwrap -> displacement.
ProcessResult process_capture(const ChirpCube& cube,
                              const ProcessOptions& options = {});

/// Which stage of each cycle feeds the fit. Contraction (ON) is the default;
/// the others exist for exploration.
enum class FitStage { kOn, kHold, kOff };

struct FitOptions {
  double on_thresh = 0.15;
  double off_thresh = 0.08;
  double slope_thresh_per_s = 0.05;
  double envelope_window_s = 0.125;  ///< 0 skips conditioning entirely
  double emg_offset_s = 0.0;
  bool per_cycle_norm = false;
  std::optional<FitInit> init;
  std::string group;
  std::size_t min_cycle_samples = 10;
  FitStage stage = FitStage::kOn;
};

/// cmd_fit core: condition -> align -> segment -> per-cycle fit -> report.
ExperimentFitReport fit_experiment(const std::vector<double>& slow_time_s,
                                   const std::vector<double>& phase_rad,
                                   const BiosignalTrace& emg,
                                   const FitOptions& options = {});

}  // namespace rmg
