// Python bindings: the sensor simulation, reconstruction pipeline, and
// metrics, with numpy arrays as the sample currency. Containers are copied
// across the boundary; none of these objects share state with Python.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "barogram/filter.hpp"
#include "barogram/io.hpp"
#include "barogram/metrics.hpp"
#include "barogram/reconstruct.hpp"
#include "barogram/sensor.hpp"
#include "barogram/signal.hpp"
#include "barogram/stft.hpp"

namespace py = pybind11;
using namespace barogram;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return std::vector<double>(a.data(), a.data() + a.size());
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

// AudioSignal and PressureTrace share a layout; bind them identically.
template <typename T>
void bind_waveform(py::module_& m, const char* name, const char* doc) {
    py::class_<T>(m, name, doc)
        .def(py::init<>())
        .def(py::init([](const DoubleArray& samples, int rate) {
                 return T(to_vector(samples), rate);
             }),
             py::arg("samples"), py::arg("sample_rate"))
        .def_readwrite("sample_rate", &T::sample_rate)
        .def_property(
            "samples", [](const T& s) { return to_array(s.samples); },
            [](T& s, const DoubleArray& a) { s.samples = to_vector(a); })
        .def("duration_s", &T::duration_s)
        .def("__len__", [](const T& s) { return s.samples.size(); })
        .def("__repr__", [name](const T& s) {
            std::ostringstream out;
            out << name << "(" << s.samples.size() << " samples at " << s.sample_rate << " Hz)";
            return out.str();
        });
}

}  // namespace

PYBIND11_MODULE(barogram, m) {
    m.doc() =
        "Acoustic capture through a differential-pressure sensor and speech "
        "reconstruction from the recorded traces.";
    m.attr("__version__") = "1.0.0";

    // --- containers ---------------------------------------------------------

    bind_waveform<AudioSignal>(m, "AudioSignal",
                               "Uniformly sampled waveform with dimensionless amplitudes.");
    bind_waveform<PressureTrace>(m, "PressureTrace",
                                 "Uniformly sampled pressure sequence in pascals.");

    py::enum_<Window>(m, "Window")
        .value("Hann", Window::Hann)
        .value("Rect", Window::Rect);

    py::class_<Spectrogram>(m, "Spectrogram",
                            "Complex one-sided short-time spectrum, frames x bins.")
        .def_readonly("n_frames", &Spectrogram::n_frames)
        .def_readonly("n_bins", &Spectrogram::n_bins)
        .def_readonly("window_size", &Spectrogram::window_size)
        .def_readonly("hop", &Spectrogram::hop)
        .def_readonly("sample_rate", &Spectrogram::sample_rate)
        .def_readonly("window_kind", &Spectrogram::window_kind)
        .def_property_readonly(
            "data",
            [](const Spectrogram& s) {
                py::array_t<std::complex<double>> out(
                    {static_cast<py::ssize_t>(s.n_frames), static_cast<py::ssize_t>(s.n_bins)});
                std::copy(s.data.begin(), s.data.end(), out.mutable_data());
                return out;
            },
            "Complex frame-by-bin matrix (a copy).")
        .def("magnitudes",
             [](const Spectrogram& s) {
                 const auto mags = s.magnitudes();
                 py::array_t<double> out(
                     {static_cast<py::ssize_t>(s.n_frames), static_cast<py::ssize_t>(s.n_bins)});
                 std::copy(mags.begin(), mags.end(), out.mutable_data());
                 return out;
             })
        .def("bin_frequency", &Spectrogram::bin_frequency, py::arg("bin"))
        .def("__repr__", [](const Spectrogram& s) {
            std::ostringstream out;
            out << "Spectrogram(" << s.n_frames << " frames x " << s.n_bins << " bins, window "
                << s.window_size << ", hop " << s.hop << ")";
            return out.str();
        });

    py::class_<NoiseProfile>(m, "NoiseProfile",
                             "Per-bin mean noise magnitude for one window size.")
        .def(py::init<>())
        .def(py::init([](const DoubleArray& magnitude, int window_size, int sample_rate) {
                 NoiseProfile p;
                 p.magnitude = to_vector(magnitude);
                 p.window_size = window_size;
                 p.sample_rate = sample_rate;
                 return p;
             }),
             py::arg("magnitude"), py::arg("window_size"), py::arg("sample_rate"))
        .def_readwrite("window_size", &NoiseProfile::window_size)
        .def_readwrite("sample_rate", &NoiseProfile::sample_rate)
        .def_property(
            "magnitude", [](const NoiseProfile& p) { return to_array(p.magnitude); },
            [](NoiseProfile& p, const DoubleArray& a) { p.magnitude = to_vector(a); });

    auto curve = py::class_<FrequencyResponseCurve>(
        m, "FrequencyResponseCurve", "Piecewise gain curve over frequency, end-clamped.");
    py::enum_<FrequencyResponseCurve::Interpolation>(curve, "Interpolation")
        .value("LogFrequency", FrequencyResponseCurve::Interpolation::LogFrequency)
        .value("LinearFrequency", FrequencyResponseCurve::Interpolation::LinearFrequency);
    py::class_<FrequencyResponseCurve::Point>(curve, "Point")
        .def(py::init<>())
        .def(py::init([](double frequency_hz, double gain) {
                 return FrequencyResponseCurve::Point{frequency_hz, gain};
             }),
             py::arg("frequency_hz"), py::arg("gain"))
        .def_readwrite("frequency_hz", &FrequencyResponseCurve::Point::frequency_hz)
        .def_readwrite("gain", &FrequencyResponseCurve::Point::gain)
        .def("__repr__", [](const FrequencyResponseCurve::Point& p) {
            std::ostringstream out;
            out << "Point(" << p.frequency_hz << " Hz, gain " << p.gain << ")";
            return out.str();
        });
    curve.def(py::init<>())
        .def_readwrite("points", &FrequencyResponseCurve::points)
        .def_readwrite("interpolation", &FrequencyResponseCurve::interpolation)
        .def("gain_at", &FrequencyResponseCurve::gain_at, py::arg("frequency_hz"))
        .def("validate", &FrequencyResponseCurve::validate)
        .def_static("unity", &FrequencyResponseCurve::unity)
        .def_static("dps_default", &FrequencyResponseCurve::dps_default)
        .def_static("low_frequency_noise_shape",
                    &FrequencyResponseCurve::low_frequency_noise_shape);

    py::class_<AcousticSource>(m, "AcousticSource",
                               "Where the sound comes from, relative to the sensor port.")
        .def(py::init<>())
        .def_readwrite("distance_m", &AcousticSource::distance_m)
        .def_readwrite("spl_db", &AcousticSource::spl_db)
        .def_readwrite("initial_phase_rad", &AcousticSource::initial_phase_rad)
        .def_readwrite("orientation_gain", &AcousticSource::orientation_gain)
        .def_readwrite("speed_of_sound_mps", &AcousticSource::speed_of_sound_mps)
        .def_readwrite("absorption_db_per_m_per_khz",
                       &AcousticSource::absorption_db_per_m_per_khz);

    py::class_<SensorModel>(m, "SensorModel",
                            "Differential pressure sensor front end: ADC rate, response, noise.")
        .def(py::init<>())
        .def_readwrite("adc_rate_hz", &SensorModel::adc_rate_hz)
        .def_readwrite("effective_bandwidth_hz", &SensorModel::effective_bandwidth_hz)
        .def_readwrite("response", &SensorModel::response)
        .def_readwrite("noise_psd_pa", &SensorModel::noise_psd_pa)
        .def_readwrite("noise_shape", &SensorModel::noise_shape)
        .def_readwrite("baseline_pa", &SensorModel::baseline_pa)
        .def_readwrite("baseline_drift_amp_pa", &SensorModel::baseline_drift_amp_pa)
        .def_readwrite("baseline_drift_period_s", &SensorModel::baseline_drift_period_s)
        .def_static("dps_default", &SensorModel::dps_default);

    auto hpss_params =
        py::class_<HpssParams>(m, "HpssParams", "Harmonic/percussive separation parameters.");
    py::enum_<HpssParams::MaskKind>(hpss_params, "MaskKind")
        .value("Ratio", HpssParams::MaskKind::Ratio)
        .value("Binary", HpssParams::MaskKind::Binary);
    hpss_params.def(py::init<>())
        .def_readwrite("window_size", &HpssParams::window_size)
        .def_readwrite("hop", &HpssParams::hop)
        .def_readwrite("time_kernel", &HpssParams::time_kernel)
        .def_readwrite("freq_kernel", &HpssParams::freq_kernel)
        .def_readwrite("n_iter", &HpssParams::n_iter)
        .def_readwrite("mask_kind", &HpssParams::mask_kind)
        .def_readwrite("window_kind", &HpssParams::window_kind);

    py::class_<HpssResult>(m, "HpssResult")
        .def_readonly("harmonic", &HpssResult::harmonic)
        .def_readonly("percussive", &HpssResult::percussive);

    py::class_<SubtractionParams>(m, "SubtractionParams",
                                  "Per-branch spectral subtraction strengths and floor.")
        .def(py::init<>())
        .def_readwrite("alpha_harmonic", &SubtractionParams::alpha_harmonic)
        .def_readwrite("alpha_percussive", &SubtractionParams::alpha_percussive)
        .def_readwrite("spectral_floor", &SubtractionParams::spectral_floor);

    py::class_<EqualizerProfile>(m, "EqualizerProfile",
                                 "Fixed equal-width band gains starting at start_hz.")
        .def(py::init<>())
        .def_readwrite("band_width_hz", &EqualizerProfile::band_width_hz)
        .def_readwrite("start_hz", &EqualizerProfile::start_hz)
        .def_readwrite("gain_cap", &EqualizerProfile::gain_cap)
        .def_readwrite("gains", &EqualizerProfile::gains)
        .def("band_index", &EqualizerProfile::band_index, py::arg("frequency_hz"))
        .def("gain_for", &EqualizerProfile::gain_for, py::arg("frequency_hz"))
        .def_static("unity", &EqualizerProfile::unity, py::arg("n_bands") = 40,
                    py::arg("band_width_hz") = 25.0);

    py::class_<PipelineConfig>(m, "PipelineConfig", "Reconstruction pipeline settings.")
        .def(py::init<>())
        .def_readwrite("target_peak", &PipelineConfig::target_peak)
        .def_readwrite("pat_mean_window_s", &PipelineConfig::pat_mean_window_s)
        .def_readwrite("highpass_cutoff_hz", &PipelineConfig::highpass_cutoff_hz)
        .def_readwrite("highpass_order", &PipelineConfig::highpass_order)
        .def_readwrite("hpss", &PipelineConfig::hpss)
        .def_readwrite("subtraction", &PipelineConfig::subtraction)
        .def_readwrite("eq_window_size", &PipelineConfig::eq_window_size)
        .def_readwrite("eq_hop", &PipelineConfig::eq_hop);

    py::class_<PipelineStages>(m, "PipelineStages",
                               "Intermediate pipeline products, in order.")
        .def_readonly("pat", &PipelineStages::pat)
        .def_readonly("normalized", &PipelineStages::normalized)
        .def_readonly("highpassed", &PipelineStages::highpassed)
        .def_readonly("denoised", &PipelineStages::denoised)
        .def_readonly("equalized", &PipelineStages::equalized)
        .def_readonly("output", &PipelineStages::output)
        .def_readonly("normalize_gain", &PipelineStages::normalize_gain);

    // --- signal helpers -------------------------------------------------------

    m.def("normalize", &normalize, py::arg("signal"), py::arg("target_peak"),
          "Peak-normalize to the requested absolute peak.");
    m.def("make_tone", &make_tone, py::arg("frequency_hz"), py::arg("duration_s"),
          py::arg("sample_rate"), py::arg("amplitude") = 1.0, py::arg("phase_rad") = 0.0,
          "amplitude * sin(2*pi*f*t + phase).");

    // --- sensor simulation ------------------------------------------------------

    m.def("acoustic_pressure_wave", &acoustic_pressure_wave, py::arg("stimulus"),
          py::arg("source"),
          "Sound pressure deviation arriving at the sensor, at the stimulus rate.");
    m.def("simulate_sensor", &simulate_sensor, py::arg("stimulus"), py::arg("source"),
          py::arg("model"), py::arg("seed"),
          "Full capture path: pressure wave, mechanical response, decimation without "
          "anti-aliasing, baseline and seeded self-noise. Deterministic per seed.");
    m.def("sine_sweep", &sine_sweep, py::arg("f_start_hz"), py::arg("f_end_hz"),
          py::arg("duration_s"), py::arg("sample_rate"),
          "Unit-amplitude phase-continuous linear chirp.");
    m.def("apply_frequency_response", &apply_frequency_response, py::arg("signal"),
          py::arg("curve"), "Frequency-domain application of a gain curve.");
    m.def("defense_lowpass", &defense_lowpass, py::arg("trace"), py::arg("cutoff_hz") = 40.0,
          py::arg("order") = 3,
          "Countermeasure: causal Butterworth lowpass applied to the trace.");
    m.def("spl_to_peak_pascal", &spl_to_peak_pascal, py::arg("spl_db"),
          "Peak pascals of a unit-amplitude stimulus at the given SPL.");

    // --- transforms and enhancement stages --------------------------------------

    m.def("pat", &pat, py::arg("trace"), py::arg("mean_window_s") = 0.0,
          "Re-interpret a pressure trace as audio by removing its mean.");
    m.def("stft", &stft, py::arg("signal"), py::arg("window_size"), py::arg("hop"),
          py::arg("window") = Window::Hann);
    m.def("istft", &istft, py::arg("spectrogram"),
          "Weighted overlap-add inverse transform.");
    m.def("highpass", &highpass, py::arg("signal"), py::arg("cutoff_hz") = 40.0,
          py::arg("order") = 3, "Zero-phase Butterworth highpass.");
    m.def("hpss", &hpss, py::arg("signal"), py::arg("params") = HpssParams{},
          "Median-filtering harmonic/percussive separation.");
    m.def("characterize_noise", &characterize_noise, py::arg("noise"),
          py::arg("window_size") = 256, py::arg("hop") = 64, py::arg("window") = Window::Hann,
          "Per-bin mean magnitude of a noise recording.");
    m.def("spectral_subtract", &spectral_subtract, py::arg("spectrogram"), py::arg("noise"),
          py::arg("alpha"), py::arg("spectral_floor"),
          "Magnitude-domain subtraction with a relative floor; phase untouched.");
    m.def("denoise", &denoise, py::arg("signal"), py::arg("noise"),
          py::arg("hpss_params") = HpssParams{}, py::arg("subtraction") = SubtractionParams{},
          "Split, per-branch subtraction, recombination, inverse transform.");
    m.def("calibrate_equalizer", &calibrate_equalizer, py::arg("reference"),
          py::arg("recovered"), py::arg("n_bands") = 40, py::arg("band_width_hz") = 25.0,
          py::arg("start_hz") = 0.0, py::arg("gain_cap") = EqualizerProfile{}.gain_cap,
          "Band gains from the reference/recovered spectrum ratio.");
    m.def("equalize", &equalize, py::arg("signal"), py::arg("profile"),
          py::arg("window_size") = 256, py::arg("hop") = 64,
          "Scale each short-time bin by its band's gain.");
    m.def(
        "ds1_pipeline",
        [](const PressureTrace& trace, const NoiseProfile& noise, const EqualizerProfile& eq,
           const PipelineConfig& config) { return ds1_pipeline(trace, noise, eq, config); },
        py::arg("trace"), py::arg("noise"), py::arg("eq"),
        py::arg("config") = PipelineConfig{},
        "Full reconstruction: pat, normalize, highpass, denoise, equalize, normalize.");
    m.def(
        "ds1_pipeline_stages",
        [](const PressureTrace& trace, const NoiseProfile& noise, const EqualizerProfile& eq,
           const PipelineConfig& config) {
            PipelineStages stages;
            ds1_pipeline(trace, noise, eq, config, &stages);
            return stages;
        },
        py::arg("trace"), py::arg("noise"), py::arg("eq"),
        py::arg("config") = PipelineConfig{},
        "Run the full reconstruction and return every intermediate stage.");

    // --- metrics -----------------------------------------------------------------

    py::class_<Transcript>(m, "Transcript")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> words) {
                 Transcript t;
                 t.words = std::move(words);
                 return t;
             }),
             py::arg("words"))
        .def_readwrite("words", &Transcript::words)
        .def("__len__", [](const Transcript& t) { return t.words.size(); });

    py::class_<WerBreakdown>(m, "WerBreakdown")
        .def_readonly("substitutions", &WerBreakdown::substitutions)
        .def_readonly("deletions", &WerBreakdown::deletions)
        .def_readonly("insertions", &WerBreakdown::insertions)
        .def_readonly("reference_length", &WerBreakdown::reference_length)
        .def_readonly("wer", &WerBreakdown::wer)
        .def("__repr__", [](const WerBreakdown& w) {
            std::ostringstream out;
            out << "WerBreakdown(S=" << w.substitutions << ", D=" << w.deletions
                << ", I=" << w.insertions << ", N=" << w.reference_length << ", wer=" << w.wer
                << ")";
            return out.str();
        });

    m.def("tokenize", &tokenize, py::arg("text"),
          "Lowercase, strip punctuation, split on whitespace.");
    m.def("wer", &wer, py::arg("reference"), py::arg("hypothesis"),
          "Word error rate via minimum-edit alignment.");
    m.def(
        "wer", [](const std::string& ref, const std::string& hyp) {
            return wer(tokenize(ref), tokenize(hyp));
        },
        py::arg("reference"), py::arg("hypothesis"),
        "Word error rate of two raw strings, tokenized first.");
    m.def("snr_reference", &snr_reference, py::arg("signal"), py::arg("reference"),
          "Reference-based SNR in dB, invariant to scaling of either argument.");
    m.def("snr_segments", &snr_segments, py::arg("signal"), py::arg("silence_mask"),
          "Speech-power over silence-power SNR in dB.");

    // --- file formats --------------------------------------------------------------

    py::class_<io::SensorConfig>(m, "SensorConfig")
        .def(py::init<>())
        .def_readwrite("model", &io::SensorConfig::model)
        .def_readwrite("source", &io::SensorConfig::source);

    auto mio = m.def_submodule("io", "WAV, CSV, and key-value config readers and writers.");
    mio.def("read_wav", &io::read_wav, py::arg("path"));
    mio.def("write_wav", &io::write_wav, py::arg("path"), py::arg("signal"),
            py::arg("peak_normalize") = true);
    mio.def("read_trace_csv", &io::read_trace_csv, py::arg("path"));
    mio.def("write_trace_csv", &io::write_trace_csv, py::arg("path"), py::arg("trace"));
    mio.def("read_noise_csv", &io::read_noise_csv, py::arg("path"));
    mio.def("write_noise_csv", &io::write_noise_csv, py::arg("path"), py::arg("profile"));
    mio.def("read_eq_csv", &io::read_eq_csv, py::arg("path"));
    mio.def("write_eq_csv", &io::write_eq_csv, py::arg("path"), py::arg("profile"));
    mio.def("read_response_csv", &io::read_response_csv, py::arg("path"));
    mio.def("write_response_csv", &io::write_response_csv, py::arg("path"), py::arg("curve"));
    mio.def("read_sensor_config", &io::read_sensor_config, py::arg("path"));
}
