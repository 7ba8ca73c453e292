#include "rmg/simulator.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"

namespace rmg {

namespace motion {

MotionFn constant(double displacement_m) {
  return [displacement_m](double) { return displacement_m; };
}

MotionFn sinusoid(double amplitude_m, double frequency_hz, double phase_rad) {
  return [=](double t) {
    return amplitude_m * std::sin(kTwoPi * frequency_hz * t + phase_rad);
  };
}

MotionFn piecewise_linear(std::vector<double> times_s,
                          std::vector<double> displacements_m) {
  if (times_s.size() != displacements_m.size() || times_s.size() < 2) {
    throw ValidationError(
        "piecewise_linear: needs >= 2 breakpoints with matching lengths");
  }
  for (std::size_t i = 1; i < times_s.size(); ++i) {
    if (!(times_s[i] > times_s[i - 1])) {
      throw ValidationError(
          "piecewise_linear: breakpoint times must be strictly increasing");
    }
  }
  return [ts = std::move(times_s), xs = std::move(displacements_m)](double t) {
    if (t <= ts.front()) return xs.front();
    if (t >= ts.back()) return xs.back();
    std::size_t hi = 1;
    while (ts[hi] < t) ++hi;
    const double f = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    return xs[hi - 1] + f * (xs[hi] - xs[hi - 1]);
  };
}

}  // namespace motion

namespace {

double eval(const MotionFn& fn, double t) { return fn ? fn(t) : 0.0; }

// Total slow-time phase of chirp i, including the static range term.
double chirp_phase(const RadarConfig& config, const TargetTrajectory& target,
                   std::size_t chirp) {
  const double t = static_cast<double>(chirp) * config.chirp_repetition_period_s;
  const double x = eval(target.motion, t);
  const double rho = eval(target.rbm, t);
  if (!(std::abs(x) + std::abs(rho) < target.range_m)) {
    throw ValidationError(
        "trajectory: |x(t)| + |rbm(t)| must stay below the nominal range "
        "(violated at slow time " + std::to_string(t) + " s)");
  }
  return 4.0 * kPi * target.range_m / config.start_wavelength_m +
         4.0 * kPi * (x + rho) / config.center_wavelength_m +
         target.initial_phase_rad;
}

double checked_beat_frequency(const RadarConfig& config,
                              const TargetTrajectory& target) {
  if (!(target.range_m > 0.0)) {
    throw ValidationError("trajectory: nominal range must be positive");
  }
  const double fb = config.beat_frequency_hz(target.range_m);
  if (fb >= config.sample_rate_hz / 2.0) {
    throw AliasError("beat frequency " + std::to_string(fb) +
                     " Hz is at or beyond fs/2 = " +
                     std::to_string(config.sample_rate_hz / 2.0) +
                     " Hz; target beyond unambiguous range");
  }
  return fb;
}

cdouble noiseless_sample(const RadarConfig& config, double beat_hz,
                         double chirp_phase_rad, double amplitude,
                         std::size_t sample) {
  const double t_fast = static_cast<double>(sample) / config.sample_rate_hz;
  return amplitude * std::polar(1.0, kTwoPi * beat_hz * t_fast + chirp_phase_rad);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent substream per chirp so synthesis order cannot change output.
std::uint64_t chirp_stream_seed(std::uint64_t seed, std::size_t chirp) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chirp) + 1));
}

}  // namespace

cdouble synthesize_beat_sample(const RadarConfig& config,
                               const TargetTrajectory& target,
                               std::size_t chirp, std::size_t sample) {
  if (chirp >= config.chirps_per_capture ||
      sample >= config.samples_per_chirp) {
    throw ValidationError("synthesize_beat_sample: chirp or sample index out "
                          "of range");
  }
  const double fb = checked_beat_frequency(config, target);
  return noiseless_sample(config, fb, chirp_phase(config, target, chirp),
                          target.amplitude, sample);
}

ChirpCube synthesize_cube(const RadarConfig& config,
                          const TargetTrajectory& target,
                          const NoiseSpec& noise, std::uint64_t seed) {
  if (!(noise.awgn_sigma >= 0.0) || !std::isfinite(noise.awgn_sigma)) {
    throw ValidationError("noise: awgn_sigma must be finite and >= 0");
  }
  const double fb = checked_beat_frequency(config, target);
  const std::size_t m = config.chirps_per_capture;
  const std::size_t n = config.samples_per_chirp;

  ChirpCube cube;
  cube.config = config;
  cube.samples.resize(m * n);

  const bool noisy = noise.awgn_sigma > 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double phi = chirp_phase(config, target, i);
    cdouble* row = cube.samples.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      row[k] = noiseless_sample(config, fb, phi, target.amplitude, k) +
               noise.dc_offset;
    }
    if (noisy) {
      std::mt19937_64 rng(chirp_stream_seed(seed, i));
      std::normal_distribution<double> gauss(0.0, noise.awgn_sigma);
      for (std::size_t k = 0; k < n; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        row[k] += cdouble{re, im};
      }
    }
  }
  return cube;
}

std::vector<double> sample_trajectory(const RadarConfig& config,
                                      const MotionFn& motion) {
  std::vector<double> out(config.chirps_per_capture);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = eval(motion, static_cast<double>(i) *
                              config.chirp_repetition_period_s);
  }
  return out;
}

}  // namespace rmg
