#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmg/types.hpp"

namespace rmg {

/// Displacement along boresight as a function of slow time (s -> m).
using MotionFn = std::function<double(double)>;

namespace motion {

MotionFn constant(double displacement_m = 0.0);

MotionFn sinusoid(double amplitude_m, double frequency_hz,
                  double phase_rad = 0.0);

/// Breakpoint interpolation; clamps outside [times.front(), times.back()].
/// Times must be strictly increasing.
MotionFn piecewise_linear(std::vector<double> times_s,
                          std::vector<double> displacements_m);

}  // namespace motion

/// Single point target seen by the simulator.
struct TargetTrajectory {
  double range_m = 0.0;            ///< nominal range R0
  MotionFn motion;                 ///< deformation of interest (null = static)
  MotionFn rbm;                    ///< unwanted body motion (null = none)
  double amplitude = 1.0;          ///< received-chirp amplitude scale
  double initial_phase_rad = 0.0;  ///< constant reflection phase
};

struct NoiseSpec {
  double awgn_sigma = 0.0;  ///< std-dev of each noise component per sample
  cdouble dc_offset{0.0, 0.0};  ///< constant added to every baseband sample
};

/// Noiseless beat-signal sample for chirp i, fast-time sample n:
/// amplitude * exp(j(2*pi*f_b*n/fs + 4*pi*R0/lambda0
///                   + 4*pi*(x + rbm)/lambda_c + initial_phase)).
/// Motion is frozen at the chirp's slow-time instant; no intra-chirp Doppler.
/// Throws AliasError when the beat frequency reaches fs/2.
cdouble synthesize_beat_sample(const RadarConfig& config,
                               const TargetTrajectory& target,
                               std::size_t chirp, std::size_t sample);

/// Batches synthesize_beat_sample over the full M x N cube and applies the
/// noise spec. Reproducible for a fixed seed; noise is drawn from per-chirp
/// substreams so chirps could be synthesized in any order with identical
/// output.
ChirpCube synthesize_cube(const RadarConfig& config,
                          const TargetTrajectory& target,
                          const NoiseSpec& noise = {},
                          std::uint64_t seed = 0);

/// Motion sampled on the slow-time grid (diagnostics and tests).
std::vector<double> sample_trajectory(const RadarConfig& config,
                                      const MotionFn& motion);

}  // namespace rmg
