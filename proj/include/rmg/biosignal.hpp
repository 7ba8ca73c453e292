#pragma once

#include <vector>

#include "rmg/types.hpp"

namespace rmg {

/// EMG and radar phase resampled onto the slow-time grid and normalized to
/// unit maximum. Phase is baseline-referenced to its first sample before
/// normalization, so phase_norm starts at 0.
struct AlignedPair {
  std::vector<double> emg_norm;
  std::vector<double> phase_norm;
  std::vector<double> slow_time_axis_s;
};

/// Full-wave rectification followed by a centered moving RMS of the given
/// window. Output rate equals input rate; the window shrinks at the edges.
BiosignalTrace envelope(const BiosignalTrace& trace, double window_s);

/// Divides by the maximum value; requires a positive maximum.
std::vector<double> normalize(const std::vector<double>& values);

/// Linearly interpolates the trace onto the given slow-time axis and
/// normalizes both channels. The trace must span the axis to within one of
/// its own sample periods. emg_offset_s shifts the trace's timestamps.
AlignedPair align_to_slow_time(const BiosignalTrace& trace,
                               const std::vector<double>& phase_rad,
                               const std::vector<double>& slow_time_axis_s,
                               double emg_offset_s = 0.0);

AlignedPair align_to_slow_time(const BiosignalTrace& trace,
                               const PhaseSignal& phase,
                               double emg_offset_s = 0.0);

}  // namespace rmg
