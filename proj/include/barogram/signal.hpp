#pragma once

#include <cstddef>
#include <vector>

namespace barogram {

// Uniformly sampled waveform. Samples are dimensionless amplitudes,
// nominally within [-1, 1] but not clipped.
struct AudioSignal {
    std::vector<double> samples;
    int sample_rate = 0;  // Hz, > 0

    AudioSignal() = default;
    AudioSignal(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    std::size_t size() const { return samples.size(); }
    double duration_s() const;
};

// Uniformly sampled pressure sequence in pascals. Same layout as
// AudioSignal; kept as a distinct type so physical units do not silently
// mix with normalized amplitudes.
struct PressureTrace {
    std::vector<double> samples;  // Pa
    int sample_rate = 0;          // Hz, > 0

    PressureTrace() = default;
    PressureTrace(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    std::size_t size() const { return samples.size(); }
    double duration_s() const;
};

// Peak-normalize to the requested absolute peak. An all-zero signal is
// returned unchanged; non-finite samples or target_peak <= 0 are errors.
AudioSignal normalize(const AudioSignal& in, double target_peak);

double peak_abs(const std::vector<double>& samples);
double rms(const std::vector<double>& samples);
double mean(const std::vector<double>& samples);

// Sine helper used throughout tests and calibration: amplitude * sin(2*pi*f*t + phase).
AudioSignal make_tone(double frequency_hz, double duration_s, int sample_rate,
                      double amplitude = 1.0, double phase_rad = 0.0);

}  // namespace barogram
