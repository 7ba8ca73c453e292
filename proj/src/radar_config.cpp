#include "rmg/radar_config.hpp"

#include <cmath>
#include <string>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"

namespace rmg {

namespace {

void require(bool condition, const std::string& invariant) {
  if (!condition) {
    throw ValidationError("radar config: violated invariant: " + invariant);
  }
}

}  // namespace

double RadarConfig::beat_frequency_hz(double range_m) const {
  return 2.0 * bandwidth_hz * range_m / (kSpeedOfLight * chirp_duration_s);
}

RadarConfigParams RadarConfig::params() const {
  return RadarConfigParams{f0_hz,
                           bandwidth_hz,
                           chirp_duration_s,
                           sample_rate_hz,
                           samples_per_chirp,
                           chirps_per_capture,
                           chirp_repetition_period_s};
}

RadarConfig make_radar_config(const RadarConfigParams& p) {
  require(std::isfinite(p.f0_hz) && p.f0_hz > 0.0, "f0 > 0");
  require(std::isfinite(p.bandwidth_hz) && p.bandwidth_hz > 0.0,
          "bandwidth > 0");
  require(std::isfinite(p.chirp_duration_s) && p.chirp_duration_s > 0.0,
          "chirp duration > 0");
  require(std::isfinite(p.sample_rate_hz) && p.sample_rate_hz > 0.0,
          "sample rate > 0");
  require(p.samples_per_chirp >= 2, "samples per chirp >= 2");
  require(p.chirps_per_capture >= 2, "chirps per capture >= 2");
  // Tiny relative slack so that N == fs*T does not trip on rounding.
  require(static_cast<double>(p.samples_per_chirp) <=
              p.sample_rate_hz * p.chirp_duration_s * (1.0 + 1e-12),
          "samples per chirp <= sample rate * chirp duration");
  require(std::isfinite(p.chirp_repetition_period_s) &&
              p.chirp_repetition_period_s >= p.chirp_duration_s,
          "chirp repetition period >= chirp duration");

  RadarConfig c;
  c.f0_hz = p.f0_hz;
  c.bandwidth_hz = p.bandwidth_hz;
  c.chirp_duration_s = p.chirp_duration_s;
  c.sample_rate_hz = p.sample_rate_hz;
  c.samples_per_chirp = p.samples_per_chirp;
  c.chirps_per_capture = p.chirps_per_capture;
  c.chirp_repetition_period_s = p.chirp_repetition_period_s;

  c.chirp_slope_hz_per_s = p.bandwidth_hz / p.chirp_duration_s;
  c.center_frequency_hz = p.f0_hz + p.bandwidth_hz / 2.0;
  c.start_wavelength_m = kSpeedOfLight / p.f0_hz;
  c.center_wavelength_m = kSpeedOfLight / c.center_frequency_hz;
  c.range_resolution_m = kSpeedOfLight / (2.0 * p.bandwidth_hz);
  c.max_velocity_m_per_s =
      c.center_wavelength_m / (4.0 * p.chirp_repetition_period_s);
  c.slow_time_rate_hz = 1.0 / p.chirp_repetition_period_s;

  for (double derived :
       {c.chirp_slope_hz_per_s, c.center_frequency_hz, c.start_wavelength_m,
        c.center_wavelength_m, c.range_resolution_m, c.max_velocity_m_per_s,
        c.slow_time_rate_hz}) {
    require(std::isfinite(derived) && derived > 0.0,
            "derived quantities strictly positive");
  }
  return c;
}

}  // namespace rmg
