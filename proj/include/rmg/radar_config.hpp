#pragma once

#include <cstddef>

namespace rmg {

/// Raw chirp/frame parameters as they would be programmed on the radar.
struct RadarConfigParams {
  double f0_hz = 0.0;                      ///< sweep start frequency
  double bandwidth_hz = 0.0;               ///< swept bandwidth
  double chirp_duration_s = 0.0;           ///< active sweep time of one chirp
  double sample_rate_hz = 0.0;             ///< fast-time ADC rate
  std::size_t samples_per_chirp = 0;       ///< fast-time samples kept per chirp
  std::size_t chirps_per_capture = 0;      ///< chirps in one capture
  double chirp_repetition_period_s = 0.0;  ///< slow-time sampling period
};

/// Validated radar parameterization with every derived quantity precomputed.
///
/// Construct through make_radar_config(); instances are immutable by
/// convention and safe to share across threads.
///
/// The slow-time sampling period (chirp repetition period) is a first-class
/// field distinct from the chirp duration: motion is sampled once per chirp
/// repetition, so the velocity budget and the slow-time axis are derived from
/// it, not from the sweep time.
struct RadarConfig {
  // raw
  double f0_hz = 0.0;
  double bandwidth_hz = 0.0;
  double chirp_duration_s = 0.0;
  double sample_rate_hz = 0.0;
  std::size_t samples_per_chirp = 0;
  std::size_t chirps_per_capture = 0;
  double chirp_repetition_period_s = 0.0;

  // derived
  double chirp_slope_hz_per_s = 0.0;  ///< bandwidth / duration
  double center_frequency_hz = 0.0;   ///< f0 + bandwidth/2
  double start_wavelength_m = 0.0;    ///< c / f0
  double center_wavelength_m = 0.0;   ///< c / center frequency
  double range_resolution_m = 0.0;    ///< c / (2 * bandwidth)
  double max_velocity_m_per_s = 0.0;  ///< center wavelength / (4 * rep period)
  double slow_time_rate_hz = 0.0;     ///< 1 / rep period

  /// Beat frequency of a static reflector at the given range.
  double beat_frequency_hz(double range_m) const;

  RadarConfigParams params() const;
};

/// Validates the raw parameters and computes the derived quantities.
/// Throws ValidationError naming the violated invariant.
RadarConfig make_radar_config(const RadarConfigParams& params);

}  // namespace rmg
