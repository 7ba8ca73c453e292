#pragma once

#include <cstddef>
#include <vector>

#include "rmg/types.hpp"

namespace rmg {

/// Subtracts the complex mean of the range-bin signal from every sample.
RangeBinSignal dc_correct(const RangeBinSignal& signal);

/// Four-quadrant wrapped phase of each sample, in (-pi, pi].
/// Throws DataError on an exactly-zero sample (phase undefined).
std::vector<double> arctangent_demodulate(const RangeBinSignal& signal);

/// Sequential single-pass unwrap: when a consecutive difference exceeds pi
/// the running offset drops by 2*pi, when below -pi it gains 2*pi. A
/// difference of exactly +/-pi is left uncorrected (inclusive boundary).
/// First output equals first input.
std::vector<double> unwrap(const std::vector<double>& wrapped);

/// Relative displacement x[i] = (phase[i] - phase[0]) * lambda_c / (4 pi).
/// x[0] is zero by construction; the static range term cancels in the
/// difference.
std::vector<double> phase_to_displacement(const PhaseSignal& phase);

struct VelocityBudgetReport {
  std::size_t flag_count = 0;    ///< steps with |dx| beyond lambda_c/4
  std::size_t worst_index = 0;   ///< start index of the largest step
  double worst_step_m = 0.0;     ///< largest |dx| seen
  double step_limit_m = 0.0;     ///< lambda_c / 4
};

/// Flags every consecutive displacement step whose magnitude exceeds the
/// lambda_c/4 per-sample budget (the unambiguous-velocity limit).
VelocityBudgetReport check_velocity_budget(
    const std::vector<double>& displacement_m, const RadarConfig& config);

}  // namespace rmg
