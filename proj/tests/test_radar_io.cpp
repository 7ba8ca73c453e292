#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "rmg/errors.hpp"
#include "rmg/radar_io.hpp"
#include "test_helpers.hpp"

using namespace rmg;

TEST_CASE("capture layout decodes little-endian I/Q pairs fast-time-major") {
  test::TempDir dir("capture_layout");
  const auto path = dir.file("capture.bin");
  // two chirps of two samples: (1+2j),(3+4j) then (5+6j),(7+8j)
  test::write_bytes(path, {1, 0, 2, 0, 3, 0, 4, 0, 5, 0, 6, 0, 7, 0, 8, 0});

  const RadarConfig config = test::small_config(2, 2);
  const ChirpCube cube = read_capture(path, config);
  CHECK(cube.at(0, 0) == cdouble{1.0, 2.0});
  CHECK(cube.at(0, 1) == cdouble{3.0, 4.0});
  CHECK(cube.at(1, 0) == cdouble{5.0, 6.0});
  CHECK(cube.at(1, 1) == cdouble{7.0, 8.0});
}

TEST_CASE("negative components decode via two's complement") {
  test::TempDir dir("capture_negative");
  const auto path = dir.file("capture.bin");
  // -1 = FF FF, -32768 = 00 80, 32767 = FF 7F
  test::write_bytes(path, {0xFF, 0xFF, 0x00, 0x80, 0xFF, 0x7F, 0x00, 0x00,
                           0, 0, 0, 0, 0, 0, 0, 0});
  const RadarConfig config = test::small_config(2, 2);
  const ChirpCube cube = read_capture(path, config);
  CHECK(cube.at(0, 0) == cdouble{-1.0, -32768.0});
  CHECK(cube.at(0, 1) == cdouble{32767.0, 0.0});
}

TEST_CASE("size mismatch reports expected and actual byte counts") {
  test::TempDir dir("capture_size");
  const auto path = dir.file("empty.bin");
  test::write_bytes(path, {});
  const RadarConfig config = test::small_config(4, 2);
  try {
    read_capture(path, config);
    FAIL("expected CaptureFormatError");
  } catch (const CaptureFormatError& e) {
    CHECK(e.expected_bytes == 4 * 2 * 4);
    CHECK(e.actual_bytes == 0);
    CHECK(std::string(e.what()).find("32") != std::string::npos);
  }

  test::write_bytes(dir.file("short.bin"), std::vector<unsigned char>(31, 7));
  CHECK_THROWS_AS(read_capture(dir.file("short.bin"), config),
                  CaptureFormatError);
  CHECK_THROWS_AS(read_capture(dir.file("missing.bin"), config), DataError);
}

TEST_CASE("write then read is the identity on int16 cubes") {
  test::TempDir dir("capture_roundtrip");
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> value(-32768, 32767);
  for (int trial = 0; trial < 10; ++trial) {
    const RadarConfig config = test::small_config(8, 3);
    ChirpCube cube;
    cube.config = config;
    cube.samples.resize(24);
    for (cdouble& s : cube.samples) {
      s = cdouble{static_cast<double>(value(rng)),
                  static_cast<double>(value(rng))};
    }
    const auto path = dir.file("cube" + std::to_string(trial) + ".bin");
    write_capture(cube, path);
    const ChirpCube back = read_capture(path, config);
    for (std::size_t i = 0; i < cube.samples.size(); ++i) {
      CHECK(back.samples[i] == cube.samples[i]);
    }
  }
}

TEST_CASE("read then write reproduces the file bytes") {
  test::TempDir dir("capture_bytes");
  const auto path = dir.file("in.bin");
  std::mt19937_64 rng(7);
  std::vector<unsigned char> bytes(6 * 4 * 4);
  for (auto& b : bytes) b = static_cast<unsigned char>(rng() & 0xFF);
  test::write_bytes(path, bytes);

  const RadarConfig config = test::small_config(4, 6);
  const ChirpCube cube = read_capture(path, config);
  const auto out = dir.file("out.bin");
  write_capture(cube, out);
  CHECK(test::read_bytes(out) == bytes);
}

TEST_CASE("capture writes are byte-deterministic and range-checked") {
  test::TempDir dir("capture_writes");
  const RadarConfig config = test::small_config(4, 2);
  ChirpCube cube;
  cube.config = config;
  cube.samples.assign(8, cdouble{12.3, -45.6});

  write_capture(cube, dir.file("a.bin"));
  write_capture(cube, dir.file("b.bin"));
  CHECK(test::read_bytes(dir.file("a.bin")) ==
        test::read_bytes(dir.file("b.bin")));

  cube.samples[5] = cdouble{40000.0, 0.0};
  try {
    write_capture(cube, dir.file("bad.bin"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("chirp 1") != std::string::npos);
  }
}

TEST_CASE("config JSON round-trips raw fields") {
  test::TempDir dir("config_json");
  const RadarConfig config = test::standard_config(128);
  const auto path = dir.file("config.json");
  save_config(config, path);
  const RadarConfig loaded = load_config(path);
  CHECK(loaded.f0_hz == config.f0_hz);
  CHECK(loaded.bandwidth_hz == config.bandwidth_hz);
  CHECK(loaded.chirp_duration_s == config.chirp_duration_s);
  CHECK(loaded.sample_rate_hz == config.sample_rate_hz);
  CHECK(loaded.samples_per_chirp == config.samples_per_chirp);
  CHECK(loaded.chirps_per_capture == config.chirps_per_capture);
  CHECK(loaded.chirp_repetition_period_s == config.chirp_repetition_period_s);
  CHECK(loaded.center_frequency_hz ==
        doctest::Approx(config.center_frequency_hz).epsilon(1e-15));
}

TEST_CASE("malformed config files raise data errors") {
  test::TempDir dir("config_bad");
  const auto path = dir.file("bad.json");

  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path), DataError);

  std::ofstream(path, std::ios::trunc)
      << R"({"format_version": 1, "f0_hz": 60e9})";
  CHECK_THROWS_AS(load_config(path), DataError);

  std::ofstream(path, std::ios::trunc) << R"({"f0_hz": 60e9})";
  CHECK_THROWS_AS(load_config(path), DataError);  // missing format_version

  CHECK_THROWS_AS(load_config(dir.file("missing.json")), DataError);
}

TEST_CASE("scenario JSON builds config, motion, noise and seed") {
  test::TempDir dir("scenario");
  const auto path = dir.file("scenario.json");
  std::ofstream(path) << R"({
    "format_version": 1,
    "config": {"f0_hz": 60e9, "bandwidth_hz": 4e9, "chirp_duration_s": 40e-6,
               "sample_rate_hz": 10e6, "samples_per_chirp": 256,
               "chirps_per_capture": 64,
               "chirp_repetition_period_s": 0.005602240896358543},
    "target": {"range_m": 0.7, "amplitude": 1200.0, "initial_phase_rad": 0.1,
               "motion": {"type": "sinusoid", "amplitude_m": 0.001,
                          "frequency_hz": 1.0},
               "rbm": {"type": "constant", "displacement_m": 0.002}},
    "noise": {"awgn_sigma": 0.5, "dc_offset": [1.5, -0.5]},
    "seed": 99
  })";
  const Scenario scenario = load_scenario(path);
  CHECK(scenario.config.samples_per_chirp == 256);
  CHECK(scenario.target.range_m == 0.7);
  CHECK(scenario.target.amplitude == 1200.0);
  CHECK(scenario.target.motion(0.25) == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(scenario.target.rbm(12.0) == 0.002);
  CHECK(scenario.noise.awgn_sigma == 0.5);
  CHECK(scenario.noise.dc_offset == cdouble{1.5, -0.5});
  CHECK(scenario.seed == 99);
}

TEST_CASE("scenario with unknown motion type is rejected") {
  test::TempDir dir("scenario_bad");
  const auto path = dir.file("scenario.json");
  std::ofstream(path) << R"({
    "format_version": 1,
    "config": {"f0_hz": 60e9, "bandwidth_hz": 4e9, "chirp_duration_s": 40e-6,
               "sample_rate_hz": 10e6, "samples_per_chirp": 16,
               "chirps_per_capture": 4,
               "chirp_repetition_period_s": 0.001},
    "target": {"range_m": 0.7, "motion": {"type": "spline"}}
  })";
  CHECK_THROWS_AS(load_scenario(path), DataError);
}

TEST_CASE("EMG CSV parses and validates with line numbers") {
  test::TempDir dir("emg");
  const auto path = dir.file("emg.csv");

  std::ofstream(path) << "time_s,voltage_v\n0,0.1\n0.01,0.2\n0.02,-0.3\n";
  const BiosignalTrace trace = read_emg_csv(path);
  CHECK(trace.values_v == std::vector<double>{0.1, 0.2, -0.3});
  CHECK(trace.sample_rate_hz == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(trace.start_time_s == 0.0);

  std::ofstream(path, std::ios::trunc) << "time,volts\n0,0.1\n";
  try {
    read_emg_csv(path);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }

  std::ofstream(path, std::ios::trunc)
      << "time_s,voltage_v\n0,0.1\n0.01,oops\n";
  try {
    read_emg_csv(path);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  std::ofstream(path, std::ios::trunc)
      << "time_s,voltage_v\n0,0.1\n0.01,0.2\n0.005,0.3\n";
  CHECK_THROWS_AS(read_emg_csv(path), DataError);  // non-monotone

  std::ofstream(path, std::ios::trunc)
      << "time_s,voltage_v\n0,0.1\n0.01,0.2\n0.05,0.3\n";
  CHECK_THROWS_AS(read_emg_csv(path), DataError);  // non-uniform

  std::ofstream(path, std::ios::trunc) << "time_s,voltage_v\n0,0.1\n";
  CHECK_THROWS_AS(read_emg_csv(path), DataError);  // too short
}

TEST_CASE("results CSV round-trips exactly, with and without aligned data") {
  test::TempDir dir("results");
  const std::vector<double> t{0.0, 0.0056022408963585435, 0.011204481792717087};
  const std::vector<double> phase{0.1, -2.5988478272200854, 3.0};
  const std::vector<double> disp{0.0, 1e-3, -2.22e-16};

  SUBCASE("without aligned columns") {
    const auto path = dir.file("r.csv");
    write_results_csv(path, t, phase, disp);
    const ResultsTable table = read_results_csv(path);
    CHECK(table.slow_time_s == t);
    CHECK(table.phase_rad == phase);
    CHECK(table.displacement_m == disp);
    CHECK(table.emg_norm.empty());

    // header + 3 rows
    std::ifstream in(path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
  }

  SUBCASE("with aligned columns") {
    AlignedPair pair;
    pair.emg_norm = {0.0, 0.5, 1.0};
    pair.phase_norm = {0.0, 0.25, 1.0};
    pair.slow_time_axis_s = t;
    const auto path = dir.file("ra.csv");
    write_results_csv(path, t, phase, disp, &pair);
    const ResultsTable table = read_results_csv(path);
    CHECK(table.emg_norm == pair.emg_norm);
    CHECK(table.phase_norm == pair.phase_norm);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "slow_time_s,phase_rad,displacement_m,emg_norm,phase_norm");
  }

  SUBCASE("identical inputs give identical bytes") {
    write_results_csv(dir.file("a.csv"), t, phase, disp);
    write_results_csv(dir.file("b.csv"), t, phase, disp);
    CHECK(test::read_bytes(dir.file("a.csv")) ==
          test::read_bytes(dir.file("b.csv")));
  }

  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(write_results_csv(dir.file("x.csv"), t, phase, {0.0}),
                    ValidationError);
  }
}

TEST_CASE("fit report JSON round-trips and recomputes aggregates") {
  test::TempDir dir("fit_report");
  std::vector<CycleFit> fits(2);
  fits[0].cycle_index = 0;
  fits[0].n_samples = 120;
  fits[0].model = {0.91, 3.68, 0.88, 1e-9, 14, true};
  fits[1].cycle_index = 2;
  fits[1].n_samples = 85;
  fits[1].model = {1.05, 4.2, 0.92, 2e-9, 11, true};
  const ExperimentFitReport report =
      summarize_cycle_fits("participant1", std::move(fits));

  const auto path = dir.file("fit.json");
  write_fit_report(report, path);
  const ExperimentFitReport loaded = read_fit_report(path);
  CHECK(loaded.group == "participant1");
  REQUIRE(loaded.cycles.size() == 2);
  CHECK(loaded.cycles[1].model.b == 4.2);
  CHECK(loaded.n_converged == 2);
  CHECK(loaded.mean_a == doctest::Approx(report.mean_a).epsilon(1e-15));
  CHECK(loaded.mean_b == doctest::Approx(report.mean_b).epsilon(1e-15));

  std::ofstream(path, std::ios::trunc) << "{\"format_version\": 1}";
  CHECK_THROWS_AS(read_fit_report(path), DataError);
}

TEST_CASE("aggregate table emits CSV and markdown") {
  test::TempDir dir("aggregate");
  std::vector<GroupAggregate> rows{{"p1", 4, 0.995, 3.4475, 0.77},
                                   {"p2", 4, 0.9125, 12.8325, 0.63}};
  write_aggregate_csv(rows, dir.file("agg.csv"));
  std::ifstream csv(dir.file("agg.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "group,n_experiments,mean_a,mean_b,mean_r_squared");
  std::getline(csv, line);
  CHECK(line.find("p1,4,") == 0);

  const std::string md = aggregate_markdown(rows);
  CHECK(md.find("| p1 | 4 | 0.9950 | 3.4475 | 0.7700 |") != std::string::npos);
  CHECK(md.find("| p2 | 4 | 0.9125 | 12.8325 | 0.6300 |") !=
        std::string::npos);
}
