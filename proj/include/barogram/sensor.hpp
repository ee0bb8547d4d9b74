#pragma once

#include <cstdint>
#include <vector>

#include "barogram/signal.hpp"

namespace barogram {

// Piecewise gain curve over frequency. Queries below the first point or
// above the last clamp to the end gains; interior queries interpolate
// linearly, by default against log10(frequency).
struct FrequencyResponseCurve {
    struct Point {
        double frequency_hz = 0;
        double gain = 0;
    };
    enum class Interpolation {
        LogFrequency,
        LinearFrequency,
    };

    std::vector<Point> points;  // strictly increasing frequency, gains >= 0
    Interpolation interpolation = Interpolation::LogFrequency;

    double gain_at(double frequency_hz) const;
    void validate() const;

    static FrequencyResponseCurve unity();
    // Bundled default approximating a differential pressure sensor that is
    // flat to ~400 Hz and rolls off steeply above (SDP800-class part).
    static FrequencyResponseCurve dps_default();
    // Default spectral weighting for sensor self-noise: dominated by
    // sub-40 Hz content with a small broadband floor.
    static FrequencyResponseCurve low_frequency_noise_shape();
};

// Where the sound comes from, relative to the sensor port.
struct AcousticSource {
    double distance_m = 0.05;
    double spl_db = 90.0;  // sound pressure level of a full-scale (|s|=1) stimulus, dB re 20 uPa
    double initial_phase_rad = 0.0;
    double orientation_gain = 1.0;            // inlet alignment factor, [0, 1]
    double speed_of_sound_mps = 343.0;
    double absorption_db_per_m_per_khz = 0.0; // atmospheric absorption coefficient
};

// Differential pressure sensor front end: ADC rate, mechanical frequency
// response, self-noise, and static baseline.
struct SensorModel {
    int adc_rate_hz = 2200;
    double effective_bandwidth_hz = 900.0;     // usable band ceiling (metadata)
    FrequencyResponseCurve response = FrequencyResponseCurve::dps_default();
    double noise_psd_pa = 0.0;                 // flat self-noise level, Pa/sqrt(Hz)
    FrequencyResponseCurve noise_shape = FrequencyResponseCurve::low_frequency_noise_shape();
    double baseline_pa = 0.0;                  // static working pressure offset
    double baseline_drift_amp_pa = 0.0;        // optional slow sinusoidal drift
    double baseline_drift_period_s = 0.0;      // 0 disables drift

    static SensorModel dps_default();
};

// Sound pressure deviation arriving at the sensor: the stimulus scaled to
// pascals from the source SPL, attenuated by inverse distance (1 m
// reference) and frequency-dependent absorption, delayed by propagation
// time, with the source's initial phase applied as a spectral rotation.
// Output is at the stimulus rate; no sensor effects yet.
PressureTrace acoustic_pressure_wave(const AudioSignal& stimulus, const AcousticSource& source);

// Full capture path: pressure wave -> mechanical frequency response ->
// decimation to the ADC rate *without* an anti-alias filter (aliasing is a
// modeled behavior of the device) -> baseline, drift, and seeded shaped
// Gaussian self-noise. Identical inputs and seed give a bit-identical
// trace. Requires stimulus rate >= adc rate.
PressureTrace simulate_sensor(const AudioSignal& stimulus, const AcousticSource& source,
                              const SensorModel& model, std::uint64_t seed);

// Unit-amplitude linear chirp from f_start to f_end (inclusive endpoints of
// the instantaneous-frequency ramp), phase-continuous. f_start == f_end
// degenerates to a pure tone.
AudioSignal sine_sweep(double f_start_hz, double f_end_hz, double duration_s, int sample_rate);

// Frequency-domain application of a gain curve (full-signal FFT, per-bin
// interpolated gain, inverse FFT).
AudioSignal apply_frequency_response(const AudioSignal& in, const FrequencyResponseCurve& curve);

// Countermeasure: causal 3rd-order Butterworth lowpass in the sensor
// electronics, same section design as the reconstruction highpass.
PressureTrace defense_lowpass(const PressureTrace& trace, double cutoff_hz = 40.0, int order = 3);

// Reference amplitude in pascals for a unit-amplitude stimulus at the
// given SPL: sqrt(2) * 20 uPa * 10^(spl/20).
double spl_to_peak_pascal(double spl_db);

}  // namespace barogram
