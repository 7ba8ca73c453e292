#include "rmg/biosignal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmg/errors.hpp"

namespace rmg {

BiosignalTrace envelope(const BiosignalTrace& trace, double window_s) {
  if (!(trace.sample_rate_hz > 0.0)) {
    throw ValidationError("envelope: trace sample rate must be positive");
  }
  if (!(window_s > 0.0)) {
    throw ValidationError("envelope: window must be positive");
  }
  const auto w = static_cast<std::size_t>(
      std::llround(window_s * trace.sample_rate_hz));
  if (w < 1) {
    throw ValidationError("envelope: window " + std::to_string(window_s) +
                          " s spans less than one sample at " +
                          std::to_string(trace.sample_rate_hz) + " Hz");
  }
  const std::size_t n = trace.values_v.size();

  // Rectify, then moving RMS over a centered window via a prefix sum of the
  // squared signal. Squaring makes the rectification a no-op numerically but
  // the stage order matches the conditioning contract.
  std::vector<double> sq_prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(trace.values_v[i]);
    sq_prefix[i + 1] = sq_prefix[i] + r * r;
  }

  BiosignalTrace out = trace;
  const std::size_t half_lo = (w - 1) / 2;
  const std::size_t half_hi = w / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half_lo ? i - half_lo : 0;
    const std::size_t hi = std::min(n, i + half_hi + 1);
    out.values_v[i] =
        std::sqrt((sq_prefix[hi] - sq_prefix[lo]) / static_cast<double>(hi - lo));
  }
  return out;
}

std::vector<double> normalize(const std::vector<double>& values) {
  if (values.empty()) {
    throw ValidationError("normalize: empty input");
  }
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) {
    throw ValidationError("normalize: maximum must be positive, got " +
                          std::to_string(peak));
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / peak;
  return out;
}

AlignedPair align_to_slow_time(const BiosignalTrace& trace,
                               const std::vector<double>& phase_rad,
                               const std::vector<double>& slow_time_axis_s,
                               double emg_offset_s) {
  if (phase_rad.empty() || phase_rad.size() != slow_time_axis_s.size()) {
    throw ValidationError("align: phase and slow-time axis must be non-empty "
                          "and of equal length");
  }
  if (trace.values_v.size() < 2) {
    throw DataError("align: EMG trace needs at least 2 samples");
  }
  if (!(trace.sample_rate_hz > 0.0)) {
    throw ValidationError("align: EMG sample rate must be positive");
  }

  const double dt = 1.0 / trace.sample_rate_hz;
  const double t0 = trace.start_time_s + emg_offset_s;
  const double t_last =
      t0 + static_cast<double>(trace.values_v.size() - 1) * dt;
  // Shared-trigger alignment: the trace must span the capture, give or take
  // one EMG sample.
  if (slow_time_axis_s.front() < t0 - dt ||
      slow_time_axis_s.back() > t_last + dt) {
    throw CoverageError(
        "align: EMG trace [" + std::to_string(t0) + ", " +
        std::to_string(t_last) + "] s does not span the capture [" +
        std::to_string(slow_time_axis_s.front()) + ", " +
        std::to_string(slow_time_axis_s.back()) + "] s");
  }

  std::vector<double> emg(slow_time_axis_s.size());
  const std::size_t n = trace.values_v.size();
  for (std::size_t i = 0; i < slow_time_axis_s.size(); ++i) {
    double pos = (slow_time_axis_s[i] - t0) * trace.sample_rate_hz;
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(k);
    emg[i] = trace.values_v[k] +
             frac * (trace.values_v[k + 1] - trace.values_v[k]);
  }

  std::vector<double> baselined(phase_rad.size());
  for (std::size_t i = 0; i < phase_rad.size(); ++i) {
    baselined[i] = phase_rad[i] - phase_rad[0];
  }

  AlignedPair pair;
  pair.emg_norm = normalize(emg);
  pair.phase_norm = normalize(baselined);
  pair.slow_time_axis_s = slow_time_axis_s;
  return pair;
}

AlignedPair align_to_slow_time(const BiosignalTrace& trace,
                               const PhaseSignal& phase,
                               double emg_offset_s) {
  return align_to_slow_time(trace, phase.values_rad, phase.slow_time_axis_s,
                            emg_offset_s);
}

}  // namespace rmg
