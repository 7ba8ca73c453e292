#include <doctest.h>

#include <cmath>

#include "rmg/biosignal.hpp"
#include "rmg/constants.hpp"
#include "rmg/errors.hpp"
#include "test_helpers.hpp"

using namespace rmg;

TEST_CASE("envelope of a constant is its magnitude") {
  BiosignalTrace trace{std::vector<double>(50, -2.0), 100.0, 0.0};
  const BiosignalTrace out = envelope(trace, 0.1);
  for (double v : out.values_v) CHECK(v == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(out.sample_rate_hz == trace.sample_rate_hz);
}

TEST_CASE("two-sample window covering [-3, 3] reports RMS 3") {
  BiosignalTrace trace{{-3.0, 3.0}, 1.0, 0.0};
  const BiosignalTrace out = envelope(trace, 2.0);
  CHECK(out.values_v[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(out.values_v[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("integer-period window over a sinusoid yields a/sqrt(2)") {
  const double amplitude = 2.0, freq = 10.0, rate = 1000.0;
  BiosignalTrace trace;
  trace.sample_rate_hz = rate;
  trace.values_v.resize(1000);
  for (std::size_t i = 0; i < trace.values_v.size(); ++i) {
    trace.values_v[i] =
        amplitude * std::sin(kTwoPi * freq * static_cast<double>(i) / rate);
  }
  const BiosignalTrace out = envelope(trace, 0.1);  // exactly one period
  const double expected = amplitude / std::sqrt(2.0);
  for (std::size_t i = 60; i + 60 < out.values_v.size(); ++i) {
    CHECK(out.values_v[i] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("envelope rejects sub-sample windows") {
  BiosignalTrace trace{std::vector<double>(10, 1.0), 100.0, 0.0};
  CHECK_THROWS_AS(envelope(trace, 0.0), ValidationError);
  CHECK_THROWS_AS(envelope(trace, 0.001), ValidationError);
}

TEST_CASE("envelope commutes with sign flip") {
  BiosignalTrace trace{{0.5, -1.5, 2.0, -0.25, 0.0, 3.0}, 10.0, 0.0};
  BiosignalTrace flipped = trace;
  for (double& v : flipped.values_v) v = -v;
  const BiosignalTrace a = envelope(trace, 0.3);
  const BiosignalTrace b = envelope(flipped, 0.3);
  for (std::size_t i = 0; i < a.values_v.size(); ++i) {
    CHECK(a.values_v[i] == b.values_v[i]);
  }
}

TEST_CASE("normalize divides by the maximum") {
  CHECK(normalize({1.0, 2.0, 4.0}) == std::vector<double>{0.25, 0.5, 1.0});
  CHECK(normalize({0.5}) == std::vector<double>{1.0});
}

TEST_CASE("normalize is idempotent and scale-invariant") {
  const std::vector<double> v{0.1, 0.7, 0.5, 0.2};
  const std::vector<double> once = normalize(v);
  CHECK(normalize(once) == once);

  std::vector<double> scaled = v;
  for (double& x : scaled) x *= 3.7;
  const std::vector<double> from_scaled = normalize(scaled);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(from_scaled[i] == doctest::Approx(once[i]).epsilon(1e-15));
  }
}

TEST_CASE("normalize requires a positive maximum") {
  CHECK_THROWS_AS(normalize({-1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(normalize({0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(normalize({}), ValidationError);
}

namespace {

std::vector<double> slow_axis(std::size_t m, double rate_hz) {
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = static_cast<double>(i) / rate_hz;
  }
  return t;
}

}  // namespace

TEST_CASE("alignment is the identity when the EMG sits on the slow-time grid") {
  const double rate = 178.5;
  const std::size_t m = 64;
  const std::vector<double> t = slow_axis(m, rate);

  BiosignalTrace trace;
  trace.sample_rate_hz = rate;
  trace.start_time_s = 0.0;
  trace.values_v.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    trace.values_v[i] = 1.0 + std::sin(0.3 * static_cast<double>(i));
  }
  std::vector<double> phase(m);
  for (std::size_t i = 0; i < m; ++i) {
    phase[i] = 0.5 * static_cast<double>(i);
  }

  const AlignedPair pair = align_to_slow_time(trace, phase, t);
  const std::vector<double> expected = normalize(trace.values_v);
  REQUIRE(pair.emg_norm.size() == m);
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(pair.emg_norm[i] == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("linear interpolation of a linear ramp is exact at midpoints") {
  const double slow_rate = 100.0;
  const std::size_t m = 32;
  const std::vector<double> t = slow_axis(m, slow_rate);

  BiosignalTrace trace;  // sampled at 2x the slow-time rate
  trace.sample_rate_hz = 2.0 * slow_rate;
  trace.values_v.resize(2 * m);
  for (std::size_t k = 0; k < trace.values_v.size(); ++k) {
    const double tk = static_cast<double>(k) / trace.sample_rate_hz;
    trace.values_v[k] = 3.0 * tk + 1.0;
  }
  std::vector<double> phase(m);
  for (std::size_t i = 0; i < m; ++i) phase[i] = static_cast<double>(i);

  const AlignedPair pair = align_to_slow_time(trace, phase, t);
  // the ramp normalized by its value at the last slow-time sample
  const double peak = 3.0 * t.back() + 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(pair.emg_norm[i] ==
          doctest::Approx((3.0 * t[i] + 1.0) / peak).epsilon(1e-12));
  }
}

TEST_CASE("a 57.1 s capture at 178.5 Hz aligns 10199 samples") {
  const double rate = 178.5;
  const double duration = 57.1423;
  const auto m = static_cast<std::size_t>(std::floor(duration * rate));
  CHECK(m == 10199);

  const std::vector<double> t = slow_axis(m, rate);
  BiosignalTrace trace;
  trace.sample_rate_hz = 1000.0;
  trace.values_v.assign(static_cast<std::size_t>(duration * 1000.0) + 2, 1.0);
  trace.values_v[100] = 2.0;  // keep the trace non-constant
  std::vector<double> phase(m);
  for (std::size_t i = 0; i < m; ++i) {
    phase[i] = std::sin(0.001 * static_cast<double>(i));
  }
  const AlignedPair pair = align_to_slow_time(trace, phase, t);
  CHECK(pair.emg_norm.size() == m);
  CHECK(pair.phase_norm.size() == m);
}

TEST_CASE("phase is baseline-referenced before normalization") {
  const double rate = 100.0;
  const std::size_t m = 16;
  const std::vector<double> t = slow_axis(m, rate);
  BiosignalTrace trace{std::vector<double>(m, 0.0), rate, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    trace.values_v[i] = 0.1 + static_cast<double>(i % 3);
  }
  std::vector<double> phase(m);
  for (std::size_t i = 0; i < m; ++i) {
    phase[i] = 5.0 + static_cast<double>(i);  // starts at 5 rad
  }
  const AlignedPair pair = align_to_slow_time(trace, phase, t);
  CHECK(pair.phase_norm.front() == 0.0);
  CHECK(pair.phase_norm.back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("EMG that does not span the capture is a coverage error") {
  const double rate = 100.0;
  const std::size_t m = 50;
  const std::vector<double> t = slow_axis(m, rate);
  std::vector<double> phase(m, 0.0);
  phase.back() = 1.0;

  BiosignalTrace trace;
  trace.sample_rate_hz = rate;
  trace.start_time_s = 0.0;
  trace.values_v.assign(20, 1.0);  // ends at 0.19 s, capture runs to 0.49 s
  CHECK_THROWS_AS(align_to_slow_time(trace, phase, t), CoverageError);

  // An offset flag can shift the trace into coverage failure as well.
  trace.values_v.assign(m, 1.0);
  CHECK_THROWS_AS(align_to_slow_time(trace, phase, t, 0.5), CoverageError);
}
