#include "barogram/sensor.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "barogram/fft.hpp"
#include "barogram/filter.hpp"

namespace barogram {

double spl_to_peak_pascal(double spl_db) {
    // Anchored at the calibration point 94 dB SPL == 1 Pa RMS, so the
    // effective reference pressure is 10^(-94/20) Pa = 19.95 uPa — the value
    // conventionally quoted as 20 uPa.
    return std::sqrt(2.0) * std::pow(10.0, (spl_db - 94.0) / 20.0);
}

void FrequencyResponseCurve::validate() const {
    if (points.size() < 2)
        throw std::invalid_argument("response curve: need at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].gain >= 0.0))
            throw std::invalid_argument("response curve: gains must be >= 0");
        if (interpolation == Interpolation::LogFrequency && !(points[i].frequency_hz > 0.0))
            throw std::invalid_argument(
                "response curve: log-frequency interpolation needs positive frequencies");
        if (i > 0 && !(points[i].frequency_hz > points[i - 1].frequency_hz))
            throw std::invalid_argument("response curve: frequencies must strictly increase");
    }
}

double FrequencyResponseCurve::gain_at(double frequency_hz) const {
    if (points.empty()) throw std::invalid_argument("response curve: empty");
    if (frequency_hz <= points.front().frequency_hz) return points.front().gain;
    if (frequency_hz >= points.back().frequency_hz) return points.back().gain;
    std::size_t hi = 1;
    while (points[hi].frequency_hz < frequency_hz) ++hi;
    const Point& a = points[hi - 1];
    const Point& b = points[hi];
    double t;
    if (interpolation == Interpolation::LogFrequency) {
        t = (std::log10(frequency_hz) - std::log10(a.frequency_hz)) /
            (std::log10(b.frequency_hz) - std::log10(a.frequency_hz));
    } else {
        t = (frequency_hz - a.frequency_hz) / (b.frequency_hz - a.frequency_hz);
    }
    return a.gain + t * (b.gain - a.gain);
}

FrequencyResponseCurve FrequencyResponseCurve::unity() {
    FrequencyResponseCurve c;
    c.points = {{1.0, 1.0}, {100000.0, 1.0}};
    return c;
}

FrequencyResponseCurve FrequencyResponseCurve::dps_default() {
    // Flat through ~400 Hz, steep mechanical roll-off above, residual
    // sensitivity past ~1.1 kHz.
    FrequencyResponseCurve c;
    c.points = {{50.0, 1.0}, {400.0, 1.0}, {650.0, 0.15}, {900.0, 0.02}, {1100.0, 0.005}};
    return c;
}

FrequencyResponseCurve FrequencyResponseCurve::low_frequency_noise_shape() {
    FrequencyResponseCurve c;
    c.points = {{1.0, 1.0}, {20.0, 1.0}, {40.0, 0.6}, {100.0, 0.25}, {300.0, 0.12}, {1100.0, 0.08}};
    return c;
}

SensorModel SensorModel::dps_default() {
    SensorModel m;
    m.adc_rate_hz = 2200;
    m.effective_bandwidth_hz = 900.0;
    m.response = FrequencyResponseCurve::dps_default();
    m.noise_psd_pa = 0.002;
    m.noise_shape = FrequencyResponseCurve::low_frequency_noise_shape();
    m.baseline_pa = 5.0;
    return m;
}

namespace {

void validate_source(const AcousticSource& s) {
    if (!(s.distance_m > 0.0))
        throw std::invalid_argument("acoustic source: distance must be positive");
    if (!(s.orientation_gain >= 0.0 && s.orientation_gain <= 1.0))
        throw std::invalid_argument("acoustic source: orientation gain must lie in [0, 1]");
    if (!(s.speed_of_sound_mps > 0.0))
        throw std::invalid_argument("acoustic source: speed of sound must be positive");
    if (!(s.absorption_db_per_m_per_khz >= 0.0))
        throw std::invalid_argument("acoustic source: absorption must be >= 0");
}

// Frequency-domain transfer over a padded copy: per-bin absorption gain and
// the rotation exp(j*(phase - w*tau)). DC/Nyquist take the real projection
// so the output stays real.
std::vector<double> propagate(const std::vector<double>& x, int rate, double tau_s,
                              double phase_rad, double absorption_db_per_m_per_khz,
                              double distance_m) {
    const std::size_t n = x.size();
    std::size_t padded = n + static_cast<std::size_t>(std::ceil(tau_s * rate)) + 1;
    padded += padded % 2;
    std::vector<double> buf(x);
    buf.resize(padded, 0.0);

    auto spec = fft::rfft(buf);
    const std::size_t n_bins = spec.size();
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double f = static_cast<double>(k) * rate / static_cast<double>(padded);
        const double absorption_db = absorption_db_per_m_per_khz * distance_m * (f / 1000.0);
        const double gain = std::pow(10.0, -absorption_db / 20.0);
        const double angle = phase_rad - 2.0 * M_PI * f * tau_s;
        if (k == 0 || k == n_bins - 1) {
            spec[k] *= gain * std::cos(angle);
        } else {
            spec[k] *= gain * std::exp(std::complex<double>(0.0, angle));
        }
    }
    auto y = fft::irfft(spec, padded);
    y.resize(n);
    return y;
}

// Point sampling with linear interpolation between source samples; no
// anti-alias filter by design, so content above the target Nyquist folds.
std::vector<double> resample_no_antialias(const std::vector<double>& x, int in_rate,
                                          int out_rate) {
    if (x.empty()) return {};
    const std::size_t n_in = x.size();
    const double ratio = static_cast<double>(in_rate) / static_cast<double>(out_rate);
    const auto n_out =
        static_cast<std::size_t>(static_cast<double>(n_in - 1) / ratio) + 1;
    std::vector<double> y(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = static_cast<double>(i) * ratio;
        auto i0 = static_cast<std::size_t>(pos);
        if (i0 >= n_in - 1) {
            y[i] = x[n_in - 1];
            continue;
        }
        const double frac = pos - static_cast<double>(i0);
        y[i] = x[i0] + frac * (x[i0 + 1] - x[i0]);
    }
    return y;
}

// Portable Box-Muller over a fixed 64-bit stream; avoids the
// implementation-defined std::normal_distribution so equal seeds give
// bit-equal traces everywhere.
class SeededGaussian {
  public:
    explicit SeededGaussian(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));  // 1-u1 in (0,1]
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    double next_unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

PressureTrace acoustic_pressure_wave(const AudioSignal& stimulus, const AcousticSource& source) {
    if (stimulus.sample_rate <= 0)
        throw std::invalid_argument("acoustic_pressure_wave: sample rate must be positive");
    if (stimulus.samples.empty())
        throw std::invalid_argument("acoustic_pressure_wave: empty stimulus");
    validate_source(source);

    const double tau = source.distance_m / source.speed_of_sound_mps;
    std::vector<double> wave =
        propagate(stimulus.samples, stimulus.sample_rate, tau, source.initial_phase_rad,
                  source.absorption_db_per_m_per_khz, source.distance_m);

    // SPL fixes the peak pressure of a unit stimulus at the 1 m reference
    // distance; amplitude then falls off as 1/distance.
    const double x_ref_m = 1.0;
    const double scale =
        spl_to_peak_pascal(source.spl_db) * source.orientation_gain * (x_ref_m / source.distance_m);
    for (double& v : wave) v *= scale;

    return PressureTrace{std::move(wave), stimulus.sample_rate};
}

PressureTrace simulate_sensor(const AudioSignal& stimulus, const AcousticSource& source,
                              const SensorModel& model, std::uint64_t seed) {
    if (model.adc_rate_hz <= 0)
        throw std::invalid_argument("simulate_sensor: adc rate must be positive");
    if (!(model.effective_bandwidth_hz > 0.0))
        throw std::invalid_argument("simulate_sensor: effective bandwidth must be positive");
    if (stimulus.sample_rate < model.adc_rate_hz)
        throw std::invalid_argument(
            "simulate_sensor: stimulus sample rate is below the ADC rate (under-sampled input)");
    if (!(model.noise_psd_pa >= 0.0))
        throw std::invalid_argument("simulate_sensor: noise level must be >= 0");
    model.response.validate();

    PressureTrace wave = acoustic_pressure_wave(stimulus, source);
    AudioSignal shaped{std::move(wave.samples), wave.sample_rate};
    shaped = apply_frequency_response(shaped, model.response);

    std::vector<double> out =
        resample_no_antialias(shaped.samples, shaped.sample_rate, model.adc_rate_hz);

    if (model.baseline_drift_amp_pa != 0.0 && model.baseline_drift_period_s > 0.0) {
        const double w = 2.0 * M_PI / model.baseline_drift_period_s;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += model.baseline_drift_amp_pa *
                      std::sin(w * static_cast<double>(i) / model.adc_rate_hz);
    }

    if (model.noise_psd_pa > 0.0) {
        const double sigma = model.noise_psd_pa * std::sqrt(model.adc_rate_hz / 2.0);
        SeededGaussian gauss(seed);
        std::vector<double> noise(out.size());
        for (double& v : noise) v = sigma * gauss();
        AudioSignal colored{std::move(noise), model.adc_rate_hz};
        colored = apply_frequency_response(colored, model.noise_shape);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += colored.samples[i];
    }

    // Baseline last, so a baseline change shifts every sample by one addition.
    if (model.baseline_pa != 0.0)
        for (double& v : out) v += model.baseline_pa;

    return PressureTrace{std::move(out), model.adc_rate_hz};
}

AudioSignal sine_sweep(double f_start_hz, double f_end_hz, double duration_s, int sample_rate) {
    if (sample_rate <= 0) throw std::invalid_argument("sine_sweep: sample rate must be positive");
    if (!(duration_s > 0.0)) throw std::invalid_argument("sine_sweep: duration must be positive");
    if (!(f_start_hz > 0.0)) throw std::invalid_argument("sine_sweep: start frequency must be > 0");
    if (f_end_hz < f_start_hz)
        throw std::invalid_argument("sine_sweep: end frequency below start frequency");
    if (!(f_end_hz < sample_rate / 2.0))
        throw std::invalid_argument("sine_sweep: end frequency must stay below Nyquist");

    const auto n = static_cast<std::size_t>(duration_s * sample_rate);
    AudioSignal out;
    out.sample_rate = sample_rate;
    out.samples.resize(n);
    const double slope = (f_end_hz - f_start_hz) / duration_s;  // Hz per second
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double phase = 2.0 * M_PI * (f_start_hz * t + 0.5 * slope * t * t);
        out.samples[i] = std::sin(phase);
    }
    return out;
}

AudioSignal apply_frequency_response(const AudioSignal& in, const FrequencyResponseCurve& curve) {
    if (in.sample_rate <= 0)
        throw std::invalid_argument("apply_frequency_response: sample rate must be positive");
    if (in.samples.empty())
        throw std::invalid_argument("apply_frequency_response: empty input");
    curve.validate();

    auto spec = fft::rfft(in.samples);
    const std::size_t n = in.samples.size();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * in.sample_rate / static_cast<double>(n);
        spec[k] *= curve.gain_at(f);
    }
    AudioSignal out;
    out.sample_rate = in.sample_rate;
    out.samples = fft::irfft(spec, n);
    return out;
}

PressureTrace defense_lowpass(const PressureTrace& trace, double cutoff_hz, int order) {
    if (trace.sample_rate <= 0)
        throw std::invalid_argument("defense_lowpass: sample rate must be positive");
    const auto sections = butterworth_sections(order, cutoff_hz, trace.sample_rate, false);
    PressureTrace out;
    out.sample_rate = trace.sample_rate;
    out.samples = sosfilt(sections, trace.samples);
    return out;
}

}  // namespace barogram
