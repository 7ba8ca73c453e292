#pragma once

#include <optional>

#include "rmg/types.hpp"

namespace rmg {

/// Fast-time taper. Rect matches the textbook DFT derivation and is the
/// default everywhere; Hann exists for noisy real captures.
enum class WindowType { kRect, kHann };

/// Unnormalized per-chirp DFT (X_k = sum x_n e^{-j 2 pi k n / N}) of every
/// chirp, plus the bin-to-range axis range[k] = k * (fs/N) * cT/(2B).
RangeProfile range_fft(const ChirpCube& cube,
                       WindowType window = WindowType::kRect);

/// Range interval restricting bin selection, in meters.
struct RangeWindow {
  double lo_m = 0.0;
  double hi_m = 0.0;
};

/// Index of the bin with the largest mean magnitude across chirps, ties
/// broken toward the smaller index. Bin 0 (DC) is excluded unless the search
/// window explicitly covers it.
std::size_t select_range_bin(const RangeProfile& profile,
                             std::optional<RangeWindow> window = {});

/// Column bin_index of the profile as a slow-time sequence.
RangeBinSignal extract_range_bin_signal(const RangeProfile& profile,
                                        std::size_t bin_index);

}  // namespace rmg
