#pragma once

namespace rmg {

// Propagation speed in air, fixed; no configurable medium.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace rmg
