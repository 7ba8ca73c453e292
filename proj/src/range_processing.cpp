#include "rmg/range_processing.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "rmg/constants.hpp"
#include "rmg/errors.hpp"

namespace rmg {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex g_fftw_plan_mutex;

class RowDft {
 public:
  explicit RowDft(std::size_t n) : in_(n), out_(n) {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    plan_ = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(in_.data()),
                             reinterpret_cast<fftw_complex*>(out_.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~RowDft() {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fftw_destroy_plan(plan_);
  }
  RowDft(const RowDft&) = delete;
  RowDft& operator=(const RowDft&) = delete;

  cdouble* in() { return in_.data(); }
  const cdouble* run() {
    fftw_execute(plan_);
    return out_.data();
  }

 private:
  std::vector<cdouble> in_;
  std::vector<cdouble> out_;
  fftw_plan plan_;
};

}  // namespace

RangeProfile range_fft(const ChirpCube& cube, WindowType window) {
  validate_cube(cube);
  const RadarConfig& config = cube.config;
  const std::size_t m = config.chirps_per_capture;
  const std::size_t n = config.samples_per_chirp;

  std::vector<double> taper;
  if (window == WindowType::kHann) {
    taper.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      taper[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) /
                                       static_cast<double>(n - 1)));
    }
  }

  RangeProfile profile;
  profile.num_chirps = m;
  profile.num_bins = n;
  profile.coefficients.resize(m * n);
  profile.slow_time_step_s = config.chirp_repetition_period_s;

  RowDft dft(n);
  for (std::size_t i = 0; i < m; ++i) {
    const cdouble* row = cube.samples.data() + i * n;
    cdouble* in = dft.in();
    if (taper.empty()) {
      std::copy(row, row + n, in);
    } else {
      for (std::size_t k = 0; k < n; ++k) in[k] = row[k] * taper[k];
    }
    const cdouble* out = dft.run();
    std::copy(out, out + n, profile.coefficients.data() + i * n);
  }

  // f_b = 2*B*R/(c*T)  =>  R = f * c*T/(2*B); bin k sits at f = k*fs/N.
  const double bin_hz = config.sample_rate_hz / static_cast<double>(n);
  const double hz_to_m = kSpeedOfLight * config.chirp_duration_s /
                         (2.0 * config.bandwidth_hz);
  profile.bin_range_axis_m.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    profile.bin_range_axis_m[k] = static_cast<double>(k) * bin_hz * hz_to_m;
  }
  return profile;
}

std::size_t select_range_bin(const RangeProfile& profile,
                             std::optional<RangeWindow> window) {
  if (profile.num_chirps == 0 || profile.num_bins == 0) {
    throw ValidationError("select_range_bin: empty profile");
  }
  std::size_t lo = 1;  // DC bin excluded by default
  std::size_t hi = profile.num_bins;
  if (window) {
    if (!(window->lo_m <= window->hi_m)) {
      throw ValidationError("select_range_bin: range window lo > hi");
    }
    lo = profile.num_bins;
    hi = 0;
    for (std::size_t k = 0; k < profile.num_bins; ++k) {
      const double r = profile.bin_range_axis_m[k];
      if (r >= window->lo_m && r <= window->hi_m) {
        lo = std::min(lo, k);
        hi = std::max(hi, k + 1);
      }
    }
    if (lo >= hi) {
      throw ValidationError("select_range_bin: range window [" +
                            std::to_string(window->lo_m) + ", " +
                            std::to_string(window->hi_m) +
                            "] m covers no bins");
    }
  }

  std::size_t best = lo;
  double best_mean = -1.0;
  for (std::size_t k = lo; k < hi; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < profile.num_chirps; ++i) {
      acc += std::abs(profile.at(i, k));
    }
    const double mean = acc / static_cast<double>(profile.num_chirps);
    if (mean > best_mean) {  // strict: ties resolve to the smaller index
      best_mean = mean;
      best = k;
    }
  }
  return best;
}

RangeBinSignal extract_range_bin_signal(const RangeProfile& profile,
                                        std::size_t bin_index) {
  if (bin_index >= profile.num_bins) {
    throw ValidationError("extract_range_bin_signal: bin " +
                          std::to_string(bin_index) + " out of range (" +
                          std::to_string(profile.num_bins) + " bins)");
  }
  RangeBinSignal signal;
  signal.bin_index = bin_index;
  signal.nominal_range_m = profile.bin_range_axis_m[bin_index];
  signal.samples.resize(profile.num_chirps);
  signal.slow_time_axis_s.resize(profile.num_chirps);
  for (std::size_t i = 0; i < profile.num_chirps; ++i) {
    signal.samples[i] = profile.at(i, bin_index);
    signal.slow_time_axis_s[i] =
        static_cast<double>(i) * profile.slow_time_step_s;
  }
  return signal;
}

}  // namespace rmg
