#include "rmg/phase_recovery.hpp"

#include <cmath>
#include <string>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"

namespace rmg {

RangeBinSignal dc_correct(const RangeBinSignal& signal) {
  if (signal.samples.size() < 2) {
    throw ValidationError("dc_correct: needs at least 2 samples");
  }
  cdouble sum{0.0, 0.0};
  for (const cdouble& s : signal.samples) sum += s;
  const cdouble mean = sum / static_cast<double>(signal.samples.size());

  RangeBinSignal out = signal;
  for (cdouble& s : out.samples) s -= mean;
  return out;
}

std::vector<double> arctangent_demodulate(const RangeBinSignal& signal) {
  std::vector<double> wrapped(signal.samples.size());
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    const cdouble& s = signal.samples[i];
    if (s.real() == 0.0 && s.imag() == 0.0) {
      throw DataError("arctangent_demodulate: zero sample at index " +
                      std::to_string(i) + "; phase undefined");
    }
    double v = std::atan2(s.imag(), s.real());
    if (v <= -kPi) v += kTwoPi;  // keep output in (-pi, pi]
    wrapped[i] = v;
  }
  return wrapped;
}

std::vector<double> unwrap(const std::vector<double>& wrapped) {
  if (wrapped.empty()) {
    throw ValidationError("unwrap: empty input");
  }
  for (double v : wrapped) {
    if (!(std::abs(v) <= kPi + 1e-12)) {
      throw ValidationError("unwrap: input values must lie in (-pi, pi]");
    }
  }
  std::vector<double> out(wrapped.size());
  out[0] = wrapped[0];
  long long turns = 0;
  for (std::size_t i = 1; i < wrapped.size(); ++i) {
    const double diff = wrapped[i] - wrapped[i - 1];
    // Exactly +/-pi stays uncorrected: the velocity-budget inequality is
    // inclusive.
    if (diff > kPi) {
      --turns;
    } else if (diff < -kPi) {
      ++turns;
    }
    out[i] = wrapped[i] + static_cast<double>(turns) * kTwoPi;
  }
  return out;
}

std::vector<double> phase_to_displacement(const PhaseSignal& phase) {
  const double scale = phase.config.center_wavelength_m / (4.0 * kPi);
  std::vector<double> x(phase.values_rad.size());
  const double base = phase.values_rad.empty() ? 0.0 : phase.values_rad[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = (phase.values_rad[i] - base) * scale;
  }
  return x;
}

VelocityBudgetReport check_velocity_budget(
    const std::vector<double>& displacement_m, const RadarConfig& config) {
  if (displacement_m.size() < 2) {
    throw ValidationError("check_velocity_budget: needs at least 2 samples");
  }
  VelocityBudgetReport report;
  report.step_limit_m = config.center_wavelength_m / 4.0;
  for (std::size_t i = 0; i + 1 < displacement_m.size(); ++i) {
    const double step = std::abs(displacement_m[i + 1] - displacement_m[i]);
    if (step > report.worst_step_m) {
      report.worst_step_m = step;
      report.worst_index = i;
    }
    if (step > report.step_limit_m) ++report.flag_count;
  }
  return report;
}

}  // namespace rmg
