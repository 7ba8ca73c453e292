#include "rmg/types.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"

namespace rmg {

void validate_cube(const ChirpCube& cube) {
  const std::size_t expected =
      cube.config.chirps_per_capture * cube.config.samples_per_chirp;
  if (cube.samples.size() != expected) {
    throw ValidationError(
        "chirp cube: sample matrix has " + std::to_string(cube.samples.size()) +
        " entries, config requires " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < cube.samples.size(); ++i) {
    const cdouble& s = cube.samples[i];
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw ValidationError("chirp cube: non-finite sample at flat index " +
                            std::to_string(i));
    }
  }
}

PhaseSignal make_phase_signal(std::vector<double> values_rad,
                              std::vector<double> slow_time_axis_s,
                              const RadarConfig& config) {
  if (values_rad.empty() || values_rad.size() != slow_time_axis_s.size()) {
    throw ValidationError("phase signal: values and slow-time axis must be "
                          "non-empty and of equal length");
  }
  for (std::size_t i = 0; i < values_rad.size(); ++i) {
    if (!std::isfinite(values_rad[i])) {
      throw ValidationError("phase signal: non-finite value at index " +
                            std::to_string(i));
    }
    if (i > 0) {
      // Post-unwrap consecutive-difference bound, with headroom for rounding.
      const double diff = std::abs(values_rad[i] - values_rad[i - 1]);
      if (diff > kPi * (1.0 + 1e-9)) {
        throw ValidationError(
            "phase signal: consecutive difference exceeds pi at index " +
            std::to_string(i));
      }
    }
  }
  PhaseSignal out;
  out.values_rad = std::move(values_rad);
  out.slow_time_axis_s = std::move(slow_time_axis_s);
  out.config = config;
  return out;
}

}  // namespace rmg
