#include "rmg/radar_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "rmg/errors.hpp"

namespace rmg {

namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr std::uint64_t kBytesPerSample = 4;  // int16 I + int16 Q

std::string fmt_double(double v) {
  // Shortest round-trip representation; locale-free and deterministic.
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

void check_format_version(const json& j, const std::filesystem::path& path) {
  if (!j.contains("format_version") ||
      !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kFormatVersion) {
    throw DataError(path.string() + ": missing or unsupported format_version" +
                    " (expected " + std::to_string(kFormatVersion) + ")");
  }
}

RadarConfig config_from_json(const json& j,
                             const std::filesystem::path& path) {
  try {
    RadarConfigParams params;
    params.f0_hz = j.at("f0_hz").get<double>();
    params.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    params.chirp_duration_s = j.at("chirp_duration_s").get<double>();
    params.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    params.samples_per_chirp = j.at("samples_per_chirp").get<std::size_t>();
    params.chirps_per_capture = j.at("chirps_per_capture").get<std::size_t>();
    params.chirp_repetition_period_s =
        j.at("chirp_repetition_period_s").get<double>();
    return make_radar_config(params);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": bad radar config: " + e.what());
  }
}

json config_to_json(const RadarConfig& config) {
  return json{{"format_version", kFormatVersion},
              {"f0_hz", config.f0_hz},
              {"bandwidth_hz", config.bandwidth_hz},
              {"chirp_duration_s", config.chirp_duration_s},
              {"sample_rate_hz", config.sample_rate_hz},
              {"samples_per_chirp", config.samples_per_chirp},
              {"chirps_per_capture", config.chirps_per_capture},
              {"chirp_repetition_period_s", config.chirp_repetition_period_s}};
}

MotionFn motion_from_json(const json& j, const std::filesystem::path& path) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    return motion::constant(j.value("displacement_m", 0.0));
  }
  if (type == "sinusoid") {
    return motion::sinusoid(j.at("amplitude_m").get<double>(),
                            j.at("frequency_hz").get<double>(),
                            j.value("phase_rad", 0.0));
  }
  if (type == "piecewise_linear") {
    return motion::piecewise_linear(
        j.at("times_s").get<std::vector<double>>(),
        j.at("displacements_m").get<std::vector<double>>());
  }
  throw DataError(path.string() + ": unknown motion type \"" + type + "\"");
}

}  // namespace

ChirpCube read_capture(const std::filesystem::path& path,
                       const RadarConfig& config) {
  std::error_code ec;
  const std::uint64_t actual = std::filesystem::file_size(path, ec);
  if (ec) {
    throw DataError("cannot stat " + path.string() + ": " + ec.message());
  }
  const std::uint64_t expected =
      static_cast<std::uint64_t>(config.chirps_per_capture) *
      config.samples_per_chirp * kBytesPerSample;
  if (actual != expected) {
    throw CaptureFormatError(
        path.string() + ": capture size mismatch: expected " +
            std::to_string(expected) + " bytes (" +
            std::to_string(config.chirps_per_capture) + " chirps x " +
            std::to_string(config.samples_per_chirp) + " samples x 4), got " +
            std::to_string(actual),
        expected, actual);
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::vector<char> raw(expected);
  in.read(raw.data(), static_cast<std::streamsize>(expected));
  if (in.gcount() != static_cast<std::streamsize>(expected)) {
    throw CaptureFormatError(
        path.string() + ": short read at byte offset " +
            std::to_string(in.gcount()),
        expected, static_cast<std::uint64_t>(in.gcount()));
  }

  ChirpCube cube;
  cube.config = config;
  cube.samples.resize(config.chirps_per_capture * config.samples_per_chirp);
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t s = 0; s < cube.samples.size(); ++s) {
    const unsigned char* p = bytes + s * kBytesPerSample;
    const auto i_val = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(p[0]) |
        (static_cast<std::uint16_t>(p[1]) << 8));
    const auto q_val = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(p[2]) |
        (static_cast<std::uint16_t>(p[3]) << 8));
    cube.samples[s] = cdouble{static_cast<double>(i_val),
                              static_cast<double>(q_val)};
  }
  return cube;
}

void write_capture(const ChirpCube& cube, const std::filesystem::path& path) {
  validate_cube(cube);
  const std::size_t n = cube.config.samples_per_chirp;
  std::vector<char> raw(cube.samples.size() * kBytesPerSample);
  auto* bytes = reinterpret_cast<unsigned char*>(raw.data());
  for (std::size_t s = 0; s < cube.samples.size(); ++s) {
    const long long i_val = std::llround(cube.samples[s].real());
    const long long q_val = std::llround(cube.samples[s].imag());
    for (long long v : {i_val, q_val}) {
      if (v < std::numeric_limits<std::int16_t>::min() ||
          v > std::numeric_limits<std::int16_t>::max()) {
        throw DataError(
            "write_capture: sample (chirp " + std::to_string(s / n) +
            ", sample " + std::to_string(s % n) + ") = " +
            fmt_double(cube.samples[s].real()) + (cube.samples[s].imag() < 0
                                                      ? "-"
                                                      : "+") +
            fmt_double(std::abs(cube.samples[s].imag())) +
            "j rounds outside int16 range");
      }
    }
    unsigned char* p = bytes + s * kBytesPerSample;
    p[0] = static_cast<unsigned char>(i_val & 0xFF);
    p[1] = static_cast<unsigned char>((i_val >> 8) & 0xFF);
    p[2] = static_cast<unsigned char>(q_val & 0xFF);
    p[3] = static_cast<unsigned char>((q_val >> 8) & 0xFF);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

RadarConfig load_config(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  check_format_version(j, path);
  return config_from_json(j, path);
}

void save_config(const RadarConfig& config,
                 const std::filesystem::path& path) {
  write_text_file(path, config_to_json(config).dump(2) + "\n");
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  check_format_version(j, path);
  try {
    Scenario scenario;
    scenario.config = config_from_json(j.at("config"), path);

    const json& target = j.at("target");
    scenario.target.range_m = target.at("range_m").get<double>();
    scenario.target.amplitude = target.value("amplitude", 1.0);
    scenario.target.initial_phase_rad = target.value("initial_phase_rad", 0.0);
    scenario.target.motion = motion_from_json(target.at("motion"), path);
    if (target.contains("rbm")) {
      scenario.target.rbm = motion_from_json(target.at("rbm"), path);
    }

    if (j.contains("noise")) {
      const json& noise = j.at("noise");
      scenario.noise.awgn_sigma = noise.value("awgn_sigma", 0.0);
      if (noise.contains("dc_offset")) {
        const auto dc = noise.at("dc_offset").get<std::vector<double>>();
        if (dc.size() != 2) {
          throw DataError(path.string() +
                          ": noise.dc_offset must be [re, im]");
        }
        scenario.noise.dc_offset = cdouble{dc[0], dc[1]};
      }
    }
    scenario.seed = j.value("seed", std::uint64_t{0});
    return scenario;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": bad scenario: " + e.what());
  }
}

BiosignalTrace read_emg_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& message) -> DataError {
    return DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                     message);
  };

  if (!std::getline(in, line)) {
    ++line_no;
    throw fail("empty file, expected header time_s,voltage_v");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,voltage_v") {
    throw fail("expected header time_s,voltage_v, got \"" + line + "\"");
  }

  std::vector<double> times, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw fail("expected two comma-separated values");
    }
    double t = 0.0, v = 0.0;
    const char* t_begin = line.data();
    const char* t_end = line.data() + comma;
    const char* v_begin = line.data() + comma + 1;
    const char* v_end = line.data() + line.size();
    auto tr = std::from_chars(t_begin, t_end, t);
    auto vr = std::from_chars(v_begin, v_end, v);
    if (tr.ec != std::errc{} || tr.ptr != t_end || vr.ec != std::errc{} ||
        vr.ptr != v_end || !std::isfinite(t) || !std::isfinite(v)) {
      throw fail("cannot parse \"" + line + "\" as time_s,voltage_v");
    }
    if (!times.empty() && !(t > times.back())) {
      throw fail("time column must be strictly increasing");
    }
    times.push_back(t);
    values.push_back(v);
  }
  if (times.size() < 2) {
    throw DataError(path.string() + ": needs at least 2 samples");
  }

  const double span = times.back() - times.front();
  const double mean_dt = span / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - mean_dt) > 0.01 * mean_dt) {
      line_no = i + 2;  // header + 1-based data row
      throw fail("non-uniform sampling: step " +
                 fmt_double(times[i] - times[i - 1]) + " s vs mean " +
                 fmt_double(mean_dt) + " s");
    }
  }

  BiosignalTrace trace;
  trace.values_v = std::move(values);
  trace.sample_rate_hz = 1.0 / mean_dt;
  trace.start_time_s = times.front();
  return trace;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<double>& slow_time_s,
                       const std::vector<double>& phase_rad,
                       const std::vector<double>& displacement_m,
                       const AlignedPair* aligned) {
  const std::size_t n = slow_time_s.size();
  if (phase_rad.size() != n || displacement_m.size() != n ||
      (aligned && (aligned->emg_norm.size() != n ||
                   aligned->phase_norm.size() != n))) {
    throw ValidationError("write_results_csv: column lengths differ");
  }
  std::ostringstream out;
  out << "slow_time_s,phase_rad,displacement_m";
  if (aligned) out << ",emg_norm,phase_norm";
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt_double(slow_time_s[i]) << ',' << fmt_double(phase_rad[i]) << ','
        << fmt_double(displacement_m[i]);
    if (aligned) {
      out << ',' << fmt_double(aligned->emg_norm[i]) << ','
          << fmt_double(aligned->phase_norm[i]);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& message) -> DataError {
    return DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                     message);
  };

  if (!std::getline(in, line)) {
    ++line_no;
    throw fail("empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_aligned = false;
  if (line == "slow_time_s,phase_rad,displacement_m,emg_norm,phase_norm") {
    has_aligned = true;
  } else if (line != "slow_time_s,phase_rad,displacement_m") {
    throw fail("unexpected header \"" + line + "\"");
  }

  ResultsTable table;
  const std::size_t n_cols = has_aligned ? 5 : 3;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double cols[5] = {0, 0, 0, 0, 0};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t c = 0; c < n_cols; ++c) {
      auto r = std::from_chars(p, end, cols[c]);
      if (r.ec != std::errc{}) throw fail("cannot parse row");
      p = r.ptr;
      if (c + 1 < n_cols) {
        if (p == end || *p != ',') throw fail("expected comma");
        ++p;
      }
    }
    if (p != end) throw fail("trailing characters");
    table.slow_time_s.push_back(cols[0]);
    table.phase_rad.push_back(cols[1]);
    table.displacement_m.push_back(cols[2]);
    if (has_aligned) {
      table.emg_norm.push_back(cols[3]);
      table.phase_norm.push_back(cols[4]);
    }
  }
  return table;
}

void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<double>& slow_time_s,
                     const std::vector<double>& x_m,
                     const std::vector<double>& rbm_m,
                     const std::vector<double>& phi_rad) {
  const std::size_t n = slow_time_s.size();
  if (x_m.size() != n || rbm_m.size() != n || phi_rad.size() != n) {
    throw ValidationError("write_truth_csv: column lengths differ");
  }
  std::ostringstream out;
  out << "slow_time_s,x_m,rbm_m,phi_rad\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt_double(slow_time_s[i]) << ',' << fmt_double(x_m[i]) << ','
        << fmt_double(rbm_m[i]) << ',' << fmt_double(phi_rad[i]) << "\n";
  }
  write_text_file(path, out.str());
}

void write_fit_report(const ExperimentFitReport& report,
                      const std::filesystem::path& path) {
  json cycles = json::array();
  for (const CycleFit& fit : report.cycles) {
    cycles.push_back(json{{"cycle_index", fit.cycle_index},
                          {"n_samples", fit.n_samples},
                          {"a", fit.model.a},
                          {"b", fit.model.b},
                          {"r_squared", fit.model.r_squared},
                          {"residual_norm", fit.model.residual_norm},
                          {"iterations", fit.model.iterations},
                          {"converged", fit.model.converged}});
  }
  const json j{{"format_version", kFormatVersion},
               {"group", report.group},
               {"cycles", cycles},
               {"aggregate",
                json{{"n_cycles", report.cycles.size()},
                     {"n_converged", report.n_converged},
                     {"mean_a", report.mean_a},
                     {"mean_b", report.mean_b},
                     {"mean_r_squared", report.mean_r_squared}}}};
  write_text_file(path, j.dump(2) + "\n");
}

ExperimentFitReport read_fit_report(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  check_format_version(j, path);
  try {
    std::vector<CycleFit> cycles;
    for (const json& c : j.at("cycles")) {
      CycleFit fit;
      fit.cycle_index = c.at("cycle_index").get<std::size_t>();
      fit.n_samples = c.at("n_samples").get<std::size_t>();
      fit.model.a = c.at("a").get<double>();
      fit.model.b = c.at("b").get<double>();
      fit.model.r_squared = c.at("r_squared").get<double>();
      fit.model.residual_norm = c.value("residual_norm", 0.0);
      fit.model.iterations = c.value("iterations", 0);
      fit.model.converged = c.at("converged").get<bool>();
      cycles.push_back(fit);
    }
    return summarize_cycle_fits(j.value("group", std::string{}),
                                std::move(cycles));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": bad fit report: " + e.what());
  }
}

namespace {

std::string aggregate_csv(const std::vector<GroupAggregate>& rows) {
  std::ostringstream out;
  out << "group,n_experiments,mean_a,mean_b,mean_r_squared\n";
  for (const GroupAggregate& row : rows) {
    out << row.group << ',' << row.n_experiments << ','
        << fmt_double(row.mean_a) << ',' << fmt_double(row.mean_b) << ','
        << fmt_double(row.mean_r_squared) << "\n";
  }
  return out.str();
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string aggregate_markdown(const std::vector<GroupAggregate>& rows) {
  std::ostringstream out;
  out << "| Group | Experiments | Mean A | Mean B | Mean R2 |\n";
  out << "|-------|-------------|--------|--------|---------|\n";
  for (const GroupAggregate& row : rows) {
    out << "| " << row.group << " | " << row.n_experiments << " | "
        << fixed4(row.mean_a) << " | " << fixed4(row.mean_b) << " | "
        << fixed4(row.mean_r_squared) << " |\n";
  }
  return out.str();
}

void write_aggregate_csv(const std::vector<GroupAggregate>& rows,
                         const std::filesystem::path& path) {
  write_text_file(path, aggregate_csv(rows));
}

void write_aggregate_markdown(const std::vector<GroupAggregate>& rows,
                              const std::filesystem::path& path) {
  write_text_file(path, aggregate_markdown(rows));
}

}  // namespace rmg
