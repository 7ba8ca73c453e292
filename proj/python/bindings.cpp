#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmg/analysis.hpp"
#include "rmg/biosignal.hpp"
#include "rmg/errors.hpp"
#include "rmg/pipeline.hpp"
#include "rmg/radar_io.hpp"
#include "rmg/simulator.hpp"

namespace py = pybind11;
using namespace rmg;

namespace {

py::array_t<cdouble> cube_to_array(const ChirpCube& cube) {
  const auto m = static_cast<py::ssize_t>(cube.config.chirps_per_capture);
  const auto n = static_cast<py::ssize_t>(cube.config.samples_per_chirp);
  py::array_t<cdouble> out({m, n});
  std::copy(cube.samples.begin(), cube.samples.end(),
            static_cast<cdouble*>(out.request().ptr));
  return out;
}

ChirpCube array_to_cube(const RadarConfig& config,
                        const py::array_t<cdouble, py::array::c_style |
                                                       py::array::forcecast>&
                            samples) {
  const auto info = samples.request();
  if (info.ndim != 2 ||
      info.shape[0] != static_cast<py::ssize_t>(config.chirps_per_capture) ||
      info.shape[1] != static_cast<py::ssize_t>(config.samples_per_chirp)) {
    throw ValidationError("samples must have shape (chirps, samples) "
                          "matching the config");
  }
  ChirpCube cube;
  cube.config = config;
  const auto* data = static_cast<const cdouble*>(info.ptr);
  cube.samples.assign(data, data + info.shape[0] * info.shape[1]);
  validate_cube(cube);
  return cube;
}

WindowType window_from_name(const std::string& name) {
  if (name == "rect") return WindowType::kRect;
  if (name == "hann") return WindowType::kHann;
  throw ValidationError("window must be 'rect' or 'hann'");
}

}  // namespace

PYBIND11_MODULE(_rmg, m) {
  m.doc() = "FMCW radar micro-motion pipeline: simulator, range processing, "
            "phase recovery, EMG alignment and deformation-model fitting";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<AliasError>(m, "AliasError", PyExc_ValueError);

  py::class_<RadarConfig>(m, "RadarConfig")
      .def_readonly("f0_hz", &RadarConfig::f0_hz)
      .def_readonly("bandwidth_hz", &RadarConfig::bandwidth_hz)
      .def_readonly("chirp_duration_s", &RadarConfig::chirp_duration_s)
      .def_readonly("sample_rate_hz", &RadarConfig::sample_rate_hz)
      .def_readonly("samples_per_chirp", &RadarConfig::samples_per_chirp)
      .def_readonly("chirps_per_capture", &RadarConfig::chirps_per_capture)
      .def_readonly("chirp_repetition_period_s",
                    &RadarConfig::chirp_repetition_period_s)
      .def_readonly("chirp_slope_hz_per_s", &RadarConfig::chirp_slope_hz_per_s)
      .def_readonly("center_frequency_hz", &RadarConfig::center_frequency_hz)
      .def_readonly("start_wavelength_m", &RadarConfig::start_wavelength_m)
      .def_readonly("center_wavelength_m", &RadarConfig::center_wavelength_m)
      .def_readonly("range_resolution_m", &RadarConfig::range_resolution_m)
      .def_readonly("max_velocity_m_per_s", &RadarConfig::max_velocity_m_per_s)
      .def_readonly("slow_time_rate_hz", &RadarConfig::slow_time_rate_hz)
      .def("beat_frequency_hz", &RadarConfig::beat_frequency_hz,
           py::arg("range_m"))
      .def("__repr__", [](const RadarConfig& c) {
        return "<RadarConfig f0=" + std::to_string(c.f0_hz / 1e9) +
               " GHz, B=" + std::to_string(c.bandwidth_hz / 1e9) +
               " GHz, N=" + std::to_string(c.samples_per_chirp) +
               ", M=" + std::to_string(c.chirps_per_capture) + ">";
      });

  m.def(
      "make_radar_config",
      [](double f0_hz, double bandwidth_hz, double chirp_duration_s,
         double sample_rate_hz, std::size_t samples_per_chirp,
         std::size_t chirps_per_capture, double chirp_repetition_period_s) {
        return make_radar_config({f0_hz, bandwidth_hz, chirp_duration_s,
                                  sample_rate_hz, samples_per_chirp,
                                  chirps_per_capture,
                                  chirp_repetition_period_s});
      },
      py::arg("f0_hz"), py::arg("bandwidth_hz"), py::arg("chirp_duration_s"),
      py::arg("sample_rate_hz"), py::arg("samples_per_chirp"),
      py::arg("chirps_per_capture"), py::arg("chirp_repetition_period_s"),
      "Validate raw chirp parameters and derive the dependent quantities.");

  m.def("load_config", &load_config, py::arg("path"));
  m.def("save_config", &save_config, py::arg("config"), py::arg("path"));

  py::class_<TargetTrajectory>(m, "TargetTrajectory")
      .def(py::init([](double range_m, MotionFn motion, MotionFn rbm,
                       double amplitude, double initial_phase_rad) {
             TargetTrajectory t;
             t.range_m = range_m;
             t.motion = std::move(motion);
             t.rbm = std::move(rbm);
             t.amplitude = amplitude;
             t.initial_phase_rad = initial_phase_rad;
             return t;
           }),
           py::arg("range_m"), py::arg("motion") = nullptr,
           py::arg("rbm") = nullptr, py::arg("amplitude") = 1.0,
           py::arg("initial_phase_rad") = 0.0)
      .def_readonly("range_m", &TargetTrajectory::range_m)
      .def_readonly("amplitude", &TargetTrajectory::amplitude);

  m.def("motion_constant", &motion::constant,
        py::arg("displacement_m") = 0.0);
  m.def("motion_sinusoid", &motion::sinusoid, py::arg("amplitude_m"),
        py::arg("frequency_hz"), py::arg("phase_rad") = 0.0);
  m.def("motion_piecewise_linear", &motion::piecewise_linear,
        py::arg("times_s"), py::arg("displacements_m"));

  m.def(
      "synthesize_cube",
      [](const RadarConfig& config, const TargetTrajectory& target,
         double awgn_sigma, cdouble dc_offset, std::uint64_t seed) {
        NoiseSpec noise;
        noise.awgn_sigma = awgn_sigma;
        noise.dc_offset = dc_offset;
        return cube_to_array(synthesize_cube(config, target, noise, seed));
      },
      py::arg("config"), py::arg("target"), py::arg("awgn_sigma") = 0.0,
      py::arg("dc_offset") = cdouble{0.0, 0.0}, py::arg("seed") = 0,
      "Synthesize a baseband capture; returns a (chirps, samples) complex "
      "array.");

  m.def(
      "sample_trajectory",
      [](const RadarConfig& config, const MotionFn& motion) {
        return sample_trajectory(config, motion);
      },
      py::arg("config"), py::arg("motion"));

  py::class_<VelocityBudgetReport>(m, "VelocityBudgetReport")
      .def_readonly("flag_count", &VelocityBudgetReport::flag_count)
      .def_readonly("worst_index", &VelocityBudgetReport::worst_index)
      .def_readonly("worst_step_m", &VelocityBudgetReport::worst_step_m)
      .def_readonly("step_limit_m", &VelocityBudgetReport::step_limit_m);

  py::class_<ProcessResult>(m, "ProcessResult")
      .def_readonly("selected_bin", &ProcessResult::selected_bin)
      .def_readonly("nominal_range_m", &ProcessResult::nominal_range_m)
      .def_readonly("velocity", &ProcessResult::velocity)
      .def_readonly("dc_corrected", &ProcessResult::dc_corrected)
      .def_property_readonly(
          "phase_rad",
          [](const ProcessResult& r) { return r.phase.values_rad; })
      .def_property_readonly(
          "slow_time_s",
          [](const ProcessResult& r) { return r.phase.slow_time_axis_s; })
      .def_readonly("displacement_m", &ProcessResult::displacement_m);

  m.def(
      "process_cube",
      [](const RadarConfig& config,
         const py::array_t<cdouble, py::array::c_style | py::array::forcecast>&
             samples,
         bool dc_correct, const std::string& window,
         std::optional<std::pair<double, double>> range_window,
         const std::string& detrend) {
        ProcessOptions options;
        options.dc_correct = dc_correct;
        options.window = window_from_name(window);
        if (range_window) {
          options.range_window =
              RangeWindow{range_window->first, range_window->second};
        }
        if (detrend == "linear") {
          options.detrend = DetrendMode::kLinear;
        } else if (detrend != "none") {
          throw ValidationError("detrend must be 'none' or 'linear'");
        }
        return process_capture(array_to_cube(config, samples), options);
      },
      py::arg("config"), py::arg("samples"), py::arg("dc_correct") = true,
      py::arg("window") = "rect", py::arg("range_window") = py::none(),
      py::arg("detrend") = "none",
      "Run range FFT, bin selection, demodulation, unwrap and displacement "
      "recovery on a capture array.");

  m.def(
      "unwrap", [](const std::vector<double>& wrapped) {
        return unwrap(wrapped);
      },
      py::arg("wrapped"));

  m.def(
      "read_capture",
      [](const std::filesystem::path& path, const RadarConfig& config) {
        return cube_to_array(read_capture(path, config));
      },
      py::arg("path"), py::arg("config"));
  m.def(
      "write_capture",
      [](const RadarConfig& config,
         const py::array_t<cdouble, py::array::c_style | py::array::forcecast>&
             samples,
         const std::filesystem::path& path) {
        write_capture(array_to_cube(config, samples), path);
      },
      py::arg("config"), py::arg("samples"), py::arg("path"));

  py::class_<BiosignalTrace>(m, "BiosignalTrace")
      .def(py::init([](std::vector<double> values, double sample_rate_hz,
                       double start_time_s) {
             return BiosignalTrace{std::move(values), sample_rate_hz,
                                   start_time_s};
           }),
           py::arg("values_v"), py::arg("sample_rate_hz"),
           py::arg("start_time_s") = 0.0)
      .def_readonly("values_v", &BiosignalTrace::values_v)
      .def_readonly("sample_rate_hz", &BiosignalTrace::sample_rate_hz)
      .def_readonly("start_time_s", &BiosignalTrace::start_time_s);

  m.def("envelope", &envelope, py::arg("trace"), py::arg("window_s"));
  m.def("normalize", &normalize, py::arg("values"));

  py::class_<AlignedPair>(m, "AlignedPair")
      .def_readonly("emg_norm", &AlignedPair::emg_norm)
      .def_readonly("phase_norm", &AlignedPair::phase_norm)
      .def_readonly("slow_time_axis_s", &AlignedPair::slow_time_axis_s);

  m.def(
      "align_to_slow_time",
      [](const BiosignalTrace& trace, const std::vector<double>& phase_rad,
         const std::vector<double>& slow_time_s, double emg_offset_s) {
        return align_to_slow_time(trace, phase_rad, slow_time_s, emg_offset_s);
      },
      py::arg("trace"), py::arg("phase_rad"), py::arg("slow_time_s"),
      py::arg("emg_offset_s") = 0.0);

  py::class_<DeformationModel>(m, "DeformationModel")
      .def_readonly("a", &DeformationModel::a)
      .def_readonly("b", &DeformationModel::b)
      .def_readonly("r_squared", &DeformationModel::r_squared)
      .def_readonly("residual_norm", &DeformationModel::residual_norm)
      .def_readonly("iterations", &DeformationModel::iterations)
      .def_readonly("converged", &DeformationModel::converged)
      .def("__repr__", [](const DeformationModel& model) {
        return "<DeformationModel a=" + std::to_string(model.a) +
               " b=" + std::to_string(model.b) +
               " r2=" + std::to_string(model.r_squared) +
               (model.converged ? " converged>" : " not converged>");
      });

  m.def(
      "fit_exponential",
      [](const std::vector<double>& x, const std::vector<double>& y,
         std::optional<std::pair<double, double>> init) {
        std::optional<FitInit> fit_init;
        if (init) fit_init = FitInit{init->first, init->second};
        return fit_exponential(x, y, fit_init);
      },
      py::arg("emg_norm"), py::arg("deformation"),
      py::arg("init") = py::none(),
      "Levenberg-Marquardt fit of y = a*(1 - exp(-b*x)).");

  m.def(
      "r_squared",
      [](const std::vector<double>& observed,
         const std::vector<double>& predicted) {
        return r_squared(observed, predicted);
      },
      py::arg("observed"), py::arg("predicted"));

  m.def(
      "predict_deformation",
      [](const DeformationModel& model, const std::vector<double>& emg_norm) {
        return predict_deformation(model, emg_norm);
      },
      py::arg("model"), py::arg("emg_norm"));

  py::class_<CycleFit>(m, "CycleFit")
      .def_readonly("cycle_index", &CycleFit::cycle_index)
      .def_readonly("n_samples", &CycleFit::n_samples)
      .def_readonly("model", &CycleFit::model);

  py::class_<ExperimentFitReport>(m, "ExperimentFitReport")
      .def_readonly("group", &ExperimentFitReport::group)
      .def_readonly("cycles", &ExperimentFitReport::cycles)
      .def_readonly("n_converged", &ExperimentFitReport::n_converged)
      .def_readonly("mean_a", &ExperimentFitReport::mean_a)
      .def_readonly("mean_b", &ExperimentFitReport::mean_b)
      .def_readonly("mean_r_squared", &ExperimentFitReport::mean_r_squared);

  m.def(
      "fit_experiment",
      [](const std::vector<double>& slow_time_s,
         const std::vector<double>& phase_rad, const BiosignalTrace& emg,
         double on_thresh, double off_thresh, double envelope_window_s,
         double emg_offset_s, bool per_cycle_norm, const std::string& group) {
        FitOptions options;
        options.on_thresh = on_thresh;
        options.off_thresh = off_thresh;
        options.envelope_window_s = envelope_window_s;
        options.emg_offset_s = emg_offset_s;
        options.per_cycle_norm = per_cycle_norm;
        options.group = group;
        return fit_experiment(slow_time_s, phase_rad, emg, options);
      },
      py::arg("slow_time_s"), py::arg("phase_rad"), py::arg("emg"),
      py::arg("on_thresh") = 0.15, py::arg("off_thresh") = 0.08,
      py::arg("envelope_window_s") = 0.125, py::arg("emg_offset_s") = 0.0,
      py::arg("per_cycle_norm") = false, py::arg("group") = std::string{},
      "Condition, align, segment and fit one experiment; returns the "
      "per-cycle report.");
}
