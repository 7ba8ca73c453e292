#include "rmg/pipeline.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rmg/errors.hpp"

namespace rmg {

namespace {

// Least-squares line subtraction over the slow-time axis.
void detrend_linear(std::vector<double>& values,
                    const std::vector<double>& times) {
  const auto n = static_cast<double>(values.size());
  double mean_t = 0.0, mean_v = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mean_t += times[i];
    mean_v += values[i];
  }
  mean_t /= n;
  mean_v /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += (times[i] - mean_t) * (values[i] - mean_v);
    den += (times[i] - mean_t) * (times[i] - mean_t);
  }
  const double slope = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] -= mean_v + slope * (times[i] - mean_t);
  }
}

}  // namespace

ProcessResult process_capture(const ChirpCube& cube,
                              const ProcessOptions& options) {
  const RangeProfile profile = range_fft(cube, options.window);
  const std::size_t bin = select_range_bin(profile, options.range_window);
  RangeBinSignal signal = extract_range_bin_signal(profile, bin);
  if (options.dc_correct) {
    signal = dc_correct(signal);
  }
  const std::vector<double> wrapped = arctangent_demodulate(signal);
  std::vector<double> values = unwrap(wrapped);

  ProcessResult result;
  result.selected_bin = bin;
  result.nominal_range_m = signal.nominal_range_m;
  result.phase = make_phase_signal(std::move(values),
                                   std::move(signal.slow_time_axis_s),
                                   cube.config);
  if (options.detrend == DetrendMode::kLinear) {
    // Convenience post-step; can relax the consecutive-difference bound.
    detrend_linear(result.phase.values_rad, result.phase.slow_time_axis_s);
  }
  result.displacement_m = phase_to_displacement(result.phase);
  result.velocity = check_velocity_budget(result.displacement_m, cube.config);
  result.dc_corrected = options.dc_correct;
  result.window = options.window;
  result.detrend = options.detrend;
  return result;
}

ExperimentFitReport fit_experiment(const std::vector<double>& slow_time_s,
                                   const std::vector<double>& phase_rad,
                                   const BiosignalTrace& emg,
                                   const FitOptions& options) {
  if (!(options.off_thresh > 0.0 &&
        options.off_thresh < options.on_thresh && options.on_thresh < 1.0)) {
    throw ValidationError(
        "fit_experiment: thresholds must satisfy 0 < off < on < 1");
  }
  BiosignalTrace conditioned = emg;
  if (options.envelope_window_s > 0.0) {
    conditioned = envelope(emg, options.envelope_window_s);
  }
  const AlignedPair pair = align_to_slow_time(
      conditioned, phase_rad, slow_time_s, options.emg_offset_s);

  SegmentationOptions seg_options;
  seg_options.on_thresh = options.on_thresh;
  seg_options.off_thresh = options.off_thresh;
  seg_options.slope_thresh_per_s = options.slope_thresh_per_s;
  const StageSegmentation seg = segment_stages(pair, seg_options);

  std::vector<CycleFit> fits;
  for (std::size_t c = 0; c < seg.cycles.size(); ++c) {
    std::optional<Interval> stage;
    switch (options.stage) {
      case FitStage::kOn:
        stage = seg.cycles[c].on;
        break;
      case FitStage::kHold:
        stage = seg.cycles[c].hold;
        break;
      case FitStage::kOff:
        stage = seg.cycles[c].off;
        break;
    }
    if (!stage || stage->size() < options.min_cycle_samples) continue;

    std::vector<double> x(pair.emg_norm.begin() + stage->begin,
                          pair.emg_norm.begin() + stage->end);
    std::vector<double> y(pair.phase_norm.begin() + stage->begin,
                          pair.phase_norm.begin() + stage->end);
    if (options.per_cycle_norm) {
      const double y0 = y.front();
      for (double& v : y) v -= y0;
      try {
        x = normalize(x);
        y = normalize(y);
      } catch (const ValidationError&) {
        continue;  // degenerate cycle (flat EMG or non-positive phase swing)
      }
    }
    try {
      CycleFit fit;
      fit.cycle_index = c;
      fit.n_samples = x.size();
      fit.model = fit_exponential(x, y, options.init);
      fits.push_back(fit);
    } catch (const ValidationError&) {
      continue;  // constant-x cycle; nothing to fit
    }
  }
  return summarize_cycle_fits(options.group, std::move(fits));
}

}  // namespace rmg
