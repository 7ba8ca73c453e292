#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rmg/radar_config.hpp"

namespace rmg {

using cdouble = std::complex<double>;

/// One capture of baseband IQ data: M chirps by N fast-time samples,
/// chirp-major (sample index fastest).
struct ChirpCube {
  RadarConfig config;
  std::vector<cdouble> samples;
  double capture_start_time_s = 0.0;

  cdouble& at(std::size_t chirp, std::size_t sample) {
    return samples[chirp * config.samples_per_chirp + sample];
  }
  const cdouble& at(std::size_t chirp, std::size_t sample) const {
    return samples[chirp * config.samples_per_chirp + sample];
  }
};

/// Throws ValidationError unless the sample matrix is exactly M x N and every
/// sample is finite.
void validate_cube(const ChirpCube& cube);

/// Per-chirp DFT coefficients plus the bin-to-range mapping.
struct RangeProfile {
  std::size_t num_chirps = 0;
  std::size_t num_bins = 0;
  std::vector<cdouble> coefficients;     ///< chirp-major, num_chirps * num_bins
  std::vector<double> bin_range_axis_m;  ///< nominal range of each bin
  double slow_time_step_s = 0.0;

  const cdouble& at(std::size_t chirp, std::size_t bin) const {
    return coefficients[chirp * num_bins + bin];
  }
};

/// The complex DFT coefficient at one bin, collected across all chirps.
struct RangeBinSignal {
  std::size_t bin_index = 0;
  double nominal_range_m = 0.0;
  std::vector<cdouble> samples;
  std::vector<double> slow_time_axis_s;
};

/// Unwrapped slow-time phase; consecutive values differ by at most pi.
struct PhaseSignal {
  std::vector<double> values_rad;
  std::vector<double> slow_time_axis_s;
  RadarConfig config;
};

/// Validating constructor for PhaseSignal.
PhaseSignal make_phase_signal(std::vector<double> values_rad,
                              std::vector<double> slow_time_axis_s,
                              const RadarConfig& config);

/// Uniformly sampled reference biosignal (sEMG) on the shared experiment
/// clock. start_time_s refers to the same trigger instant as the capture.
struct BiosignalTrace {
  std::vector<double> values_v;
  double sample_rate_hz = 0.0;
  double start_time_s = 0.0;
};

/// Fitted saturating-exponential deformation model  y = a * (1 - exp(-b x)).
struct DeformationModel {
  double a = 0.0;  ///< asymptote
  double b = 0.0;  ///< exponent coefficient (curvature)
  double r_squared = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

}  // namespace rmg
