#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmg/biosignal.hpp"
#include "rmg/types.hpp"

namespace rmg {

struct FitInit {
  double a = 0.0;
  double b = 0.0;
};

/// Levenberg-Marquardt fit of y = a * (1 - exp(-b x)) with the analytic
/// Jacobian. Default start: a = max(y), b = 5. Damping starts at 1e-3,
/// grows x10 on a rejected step and shrinks /10 on an accepted one; steps
/// that would cross a <= 0 or b <= 0 are rejected. Stops when the step norm
/// drops below 1e-10 (converged) or after 200 iterations.
DeformationModel fit_exponential(std::span<const double> emg_norm,
                                 std::span<const double> deformation,
                                 std::optional<FitInit> init = {});

/// Coefficient of determination 1 - SS_res/SS_tot; may be negative.
/// Throws ValidationError when the observed values are constant.
double r_squared(std::span<const double> observed,
                 std::span<const double> predicted);

/// Model evaluation a * (1 - exp(-b x)) over a normalized EMG vector.
std::vector<double> predict_deformation(const DeformationModel& model,
                                        std::span<const double> emg_norm);

/// Half-open index interval [begin, end) on the slow-time grid.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// One contraction-relaxation cycle: rising stage, optional plateau,
/// optional falling stage (missing when the capture ends mid-cycle).
struct StageCycle {
  Interval on;
  std::optional<Interval> hold;
  std::optional<Interval> off;
};

struct StageSegmentation {
  std::vector<Interval> on_intervals;
  std::vector<Interval> hold_intervals;
  std::vector<Interval> off_intervals;
  std::vector<StageCycle> cycles;
};

struct SegmentationOptions {
  double on_thresh = 0.15;         ///< rising activation threshold
  double off_thresh = 0.08;        ///< falling deactivation threshold
  double slope_thresh_per_s = 0.05;  ///< |d(emg_norm)/dt| below = plateau
};

/// Schmitt-trigger segmentation of the normalized EMG: a cycle activates
/// when the envelope rises through on_thresh and deactivates when it falls
/// through off_thresh. Within a cycle, ON runs until the slope flattens,
/// HOLD spans the plateau, OFF runs from the start of the fall to
/// deactivation. Empty segmentation is valid output.
StageSegmentation segment_stages(const AlignedPair& pair,
                                 const SegmentationOptions& options = {});

/// ON- and OFF-stage point sequences in the (phase_norm, emg_norm) plane,
/// ordered by time, plus the loop orientation. signed_area is positive for
/// a clockwise loop.
struct HysteresisCurve {
  std::vector<std::pair<double, double>> on_points;
  std::vector<std::pair<double, double>> off_points;
  double signed_area = 0.0;
};

HysteresisCurve hysteresis_curve(const AlignedPair& pair,
                                 const StageSegmentation& segmentation,
                                 std::size_t cycle_index);

struct DeformationRateReport {
  double on_rate_per_s = 0.0;   ///< mean |d(phase_norm)/dt| over ON stages
  double off_rate_per_s = 0.0;  ///< mean |d(phase_norm)/dt| over OFF stages
  std::optional<double> on_off_ratio;  ///< empty when the OFF rate is zero
};

DeformationRateReport deformation_rate_report(
    const AlignedPair& pair, const StageSegmentation& segmentation);

/// One cycle's fit within an experiment.
struct CycleFit {
  std::size_t cycle_index = 0;
  std::size_t n_samples = 0;
  DeformationModel model;
};

/// Per-experiment fit report: per-cycle models plus aggregates over the
/// converged cycles (NaN when none converged).
struct ExperimentFitReport {
  std::string group;
  std::vector<CycleFit> cycles;
  std::size_t n_converged = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_r_squared = 0.0;
};

ExperimentFitReport summarize_cycle_fits(std::string group,
                                         std::vector<CycleFit> cycles);

/// Per-group arithmetic means of the per-experiment aggregate values.
struct GroupAggregate {
  std::string group;
  std::size_t n_experiments = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_r_squared = 0.0;
};

/// Groups reports by their group label (first-appearance order) and averages
/// the per-experiment aggregates. Experiments without a converged cycle are
/// skipped.
std::vector<GroupAggregate> aggregate_reports(
    const std::vector<ExperimentFitReport>& reports);

}  // namespace rmg
