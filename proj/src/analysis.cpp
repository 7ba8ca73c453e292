#include "rmg/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "rmg/errors.hpp"

namespace rmg {

namespace {

double sum_squared_residuals(std::span<const double> x,
                             std::span<const double> y, double a, double b) {
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - a * (1.0 - std::exp(-b * x[i]));
    sse += r * r;
  }
  return sse;
}

}  // namespace

DeformationModel fit_exponential(std::span<const double> x,
                                 std::span<const double> y,
                                 std::optional<FitInit> init) {
  if (x.size() != y.size()) {
    throw ValidationError("fit_exponential: x and y lengths differ");
  }
  if (x.size() < 10) {
    throw ValidationError("fit_exponential: needs at least 10 samples, got " +
                          std::to_string(x.size()));
  }
  double x_min = x[0], x_max = x[0];
  for (double v : x) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw ValidationError("fit_exponential: x values must lie in [0, 1]");
    }
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw ValidationError("fit_exponential: non-finite y value");
    }
  }
  if (x_max - x_min < 1e-12) {
    throw ValidationError("fit_exponential: degenerate data, x is constant");
  }
  if (init && (!(init->a > 0.0) || !(init->b > 0.0))) {
    throw ValidationError("fit_exponential: init coefficients must be > 0");
  }

  double a = init ? init->a : *std::max_element(y.begin(), y.end());
  if (!(a > 0.0)) a = 1e-3;
  double b = init ? init->b : 5.0;

  double lambda = 1e-3;
  double sse = sum_squared_residuals(x, y, a, b);
  const int max_iterations = 200;
  const double step_tol = 1e-10;

  DeformationModel model;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    model.iterations = iter;

    // Normal equations for r_i = y_i - a*g_i with g_i = 1 - exp(-b*x_i):
    // J = [-g, -a*x*exp(-b*x)], so JtJ and -Jtr assemble from g and h.
    double gg = 0.0, gh = 0.0, hh = 0.0, rg = 0.0, rh = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = std::exp(-b * x[i]);
      const double g = 1.0 - e;
      const double h = a * x[i] * e;
      const double r = y[i] - a * g;
      gg += g * g;
      gh += g * h;
      hh += h * h;
      rg += r * g;
      rh += r * h;
    }

    const double daa = gg * (1.0 + lambda);
    const double dbb = hh * (1.0 + lambda);
    const double det = daa * dbb - gh * gh;
    bool rejected = true;
    if (std::isfinite(det) && std::abs(det) > 1e-300) {
      const double step_a = (dbb * rg - gh * rh) / det;
      const double step_b = (daa * rh - gh * rg) / det;
      const double cand_a = a + step_a;
      const double cand_b = b + step_b;
      if (std::isfinite(cand_a) && std::isfinite(cand_b) && cand_a > 0.0 &&
          cand_b > 0.0) {
        const double cand_sse = sum_squared_residuals(x, y, cand_a, cand_b);
        if (std::isfinite(cand_sse) && cand_sse <= sse) {
          a = cand_a;
          b = cand_b;
          sse = cand_sse;
          lambda = std::max(lambda * 0.1, 1e-12);
          rejected = false;
          if (std::hypot(step_a, step_b) < step_tol) {
            model.converged = true;
            break;
          }
        }
      }
    }
    if (rejected) {
      lambda *= 10.0;
      if (lambda > 1e15) break;  // damped to a standstill
    }
  }

  model.a = a;
  model.b = b;
  model.residual_norm = std::sqrt(sse);

  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - mean_y) * (v - mean_y);
  // Constant y has no variance to explain; call a zero-residual fit perfect.
  model.r_squared = ss_tot > 0.0 ? 1.0 - sse / ss_tot : (sse == 0.0 ? 1.0 : 0.0);
  return model;
}

double r_squared(std::span<const double> observed,
                 std::span<const double> predicted) {
  if (observed.empty() || observed.size() != predicted.size()) {
    throw ValidationError("r_squared: inputs must be non-empty and of equal "
                          "length");
  }
  double mean = 0.0;
  for (double v : observed) mean += v;
  mean /= static_cast<double>(observed.size());

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw ValidationError("r_squared: observed values are constant");
  }
  return 1.0 - ss_res / ss_tot;
}

std::vector<double> predict_deformation(const DeformationModel& model,
                                        std::span<const double> emg_norm) {
  for (double v : emg_norm) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw ValidationError("predict_deformation: emg_norm must lie in [0, 1]");
    }
  }
  std::vector<double> out(emg_norm.size());
  for (std::size_t i = 0; i < emg_norm.size(); ++i) {
    out[i] = model.a * (1.0 - std::exp(-model.b * emg_norm[i]));
  }
  return out;
}

StageSegmentation segment_stages(const AlignedPair& pair,
                                 const SegmentationOptions& options) {
  if (!(options.off_thresh > 0.0 && options.off_thresh < options.on_thresh &&
        options.on_thresh < 1.0)) {
    throw ValidationError(
        "segment_stages: thresholds must satisfy 0 < off < on < 1");
  }
  const std::vector<double>& e = pair.emg_norm;
  const std::vector<double>& t = pair.slow_time_axis_s;
  if (e.size() != t.size()) {
    throw ValidationError("segment_stages: pair channel lengths differ");
  }
  const std::size_t n = e.size();
  StageSegmentation seg;
  if (n < 3) return seg;

  std::vector<double> slope(n);
  slope[0] = (e[1] - e[0]) / (t[1] - t[0]);
  slope[n - 1] = (e[n - 1] - e[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope[i] = (e[i + 1] - e[i - 1]) / (t[i + 1] - t[i - 1]);
  }

  enum class State { kIdle, kOn, kHold, kOff };
  State state = State::kIdle;
  StageCycle cycle;
  std::size_t stage_start = 0;

  auto close_cycle = [&](std::size_t end) {
    switch (state) {
      case State::kOn:
        cycle.on = {stage_start, end};
        break;
      case State::kHold:
        cycle.hold = Interval{stage_start, end};
        break;
      case State::kOff:
        cycle.off = Interval{stage_start, end};
        break;
      case State::kIdle:
        return;
    }
    if (cycle.on.size() > 0) {
      seg.on_intervals.push_back(cycle.on);
      if (cycle.hold) seg.hold_intervals.push_back(*cycle.hold);
      if (cycle.off) seg.off_intervals.push_back(*cycle.off);
      seg.cycles.push_back(cycle);
    }
    cycle = StageCycle{};
  };

  for (std::size_t i = 0; i < n; ++i) {
    switch (state) {
      case State::kIdle:
        if (i > 0 && e[i - 1] < options.on_thresh &&
            e[i] >= options.on_thresh) {
          state = State::kOn;
          stage_start = i;
        }
        break;
      case State::kOn:
        if (i > 0 && e[i - 1] >= options.off_thresh &&
            e[i] < options.off_thresh) {
          // Fell straight through without a plateau or a distinct fall.
          cycle.on = {stage_start, i};
          close_cycle(i);
          state = State::kIdle;
        } else if (std::abs(slope[i]) < options.slope_thresh_per_s) {
          cycle.on = {stage_start, i};
          state = State::kHold;
          stage_start = i;
        } else if (slope[i] < -options.slope_thresh_per_s) {
          // Peak without plateau (triangle pulse): straight to the fall.
          cycle.on = {stage_start, i};
          state = State::kOff;
          stage_start = i;
        }
        break;
      case State::kHold:
        if (slope[i] < -options.slope_thresh_per_s ||
            (i > 0 && e[i - 1] >= options.off_thresh &&
             e[i] < options.off_thresh)) {
          cycle.hold = Interval{stage_start, i};
          state = State::kOff;
          stage_start = i;
        }
        break;
      case State::kOff:
        if (i > 0 && e[i - 1] >= options.off_thresh &&
            e[i] < options.off_thresh) {
          cycle.off = Interval{stage_start, i + 1};
          close_cycle(i + 1);
          state = State::kIdle;
        }
        break;
    }
  }
  close_cycle(n);
  return seg;
}

HysteresisCurve hysteresis_curve(const AlignedPair& pair,
                                 const StageSegmentation& segmentation,
                                 std::size_t cycle_index) {
  if (cycle_index >= segmentation.cycles.size()) {
    throw DataError("hysteresis_curve: cycle " + std::to_string(cycle_index) +
                    " not found (" +
                    std::to_string(segmentation.cycles.size()) + " cycles)");
  }
  const StageCycle& cycle = segmentation.cycles[cycle_index];

  HysteresisCurve curve;
  auto collect = [&](const Interval& iv) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(iv.size());
    for (std::size_t i = iv.begin; i < iv.end; ++i) {
      pts.emplace_back(pair.phase_norm[i], pair.emg_norm[i]);
    }
    return pts;
  };
  curve.on_points = collect(cycle.on);
  if (cycle.off) curve.off_points = collect(*cycle.off);

  // Shoelace over the closed ON->OFF loop; positive result means clockwise
  // in the (phase, EMG) plane.
  std::vector<std::pair<double, double>> loop = curve.on_points;
  loop.insert(loop.end(), curve.off_points.begin(), curve.off_points.end());
  double twice_ccw_area = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& [x0, y0] = loop[i];
    const auto& [x1, y1] = loop[(i + 1) % loop.size()];
    twice_ccw_area += x0 * y1 - x1 * y0;
  }
  curve.signed_area = -0.5 * twice_ccw_area;
  return curve;
}

DeformationRateReport deformation_rate_report(
    const AlignedPair& pair, const StageSegmentation& segmentation) {
  if (segmentation.on_intervals.empty() ||
      segmentation.off_intervals.empty()) {
    throw DataError(
        "deformation_rate_report: needs at least one ON and one OFF stage");
  }
  auto mean_abs_slope = [&](const std::vector<Interval>& intervals) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const Interval& iv : intervals) {
      for (std::size_t i = iv.begin; i + 1 < iv.end; ++i) {
        const double dt =
            pair.slow_time_axis_s[i + 1] - pair.slow_time_axis_s[i];
        acc += std::abs(pair.phase_norm[i + 1] - pair.phase_norm[i]) / dt;
        ++count;
      }
    }
    return count == 0 ? 0.0 : acc / static_cast<double>(count);
  };

  DeformationRateReport report;
  report.on_rate_per_s = mean_abs_slope(segmentation.on_intervals);
  report.off_rate_per_s = mean_abs_slope(segmentation.off_intervals);
  if (report.off_rate_per_s > 0.0) {
    report.on_off_ratio = report.on_rate_per_s / report.off_rate_per_s;
  }
  return report;
}

ExperimentFitReport summarize_cycle_fits(std::string group,
                                         std::vector<CycleFit> cycles) {
  ExperimentFitReport report;
  report.group = std::move(group);
  report.cycles = std::move(cycles);

  double sum_a = 0.0, sum_b = 0.0, sum_r2 = 0.0;
  for (const CycleFit& fit : report.cycles) {
    if (!fit.model.converged) continue;
    ++report.n_converged;
    sum_a += fit.model.a;
    sum_b += fit.model.b;
    sum_r2 += fit.model.r_squared;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto n = static_cast<double>(report.n_converged);
  report.mean_a = report.n_converged ? sum_a / n : nan;
  report.mean_b = report.n_converged ? sum_b / n : nan;
  report.mean_r_squared = report.n_converged ? sum_r2 / n : nan;
  return report;
}

std::vector<GroupAggregate> aggregate_reports(
    const std::vector<ExperimentFitReport>& reports) {
  std::vector<GroupAggregate> rows;
  std::vector<std::array<double, 3>> sums;
  for (const ExperimentFitReport& report : reports) {
    if (report.n_converged == 0) continue;
    std::size_t idx = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].group == report.group) {
        idx = i;
        break;
      }
    }
    if (idx == rows.size()) {
      rows.push_back(GroupAggregate{report.group, 0, 0.0, 0.0, 0.0});
      sums.push_back({0.0, 0.0, 0.0});
    }
    rows[idx].n_experiments += 1;
    sums[idx][0] += report.mean_a;
    sums[idx][1] += report.mean_b;
    sums[idx][2] += report.mean_r_squared;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto n = static_cast<double>(rows[i].n_experiments);
    rows[i].mean_a = sums[i][0] / n;
    rows[i].mean_b = sums[i][1] / n;
    rows[i].mean_r_squared = sums[i][2] / n;
  }
  return rows;
}

}  // namespace rmg
