#include "barogram/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace barogram {

double AudioSignal::duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
}

double PressureTrace::duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
}

double peak_abs(const std::vector<double>& samples) {
    double peak = 0.0;
    for (double v : samples) peak = std::max(peak, std::abs(v));
    return peak;
}

double rms(const std::vector<double>& samples) {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v * v;
    return std::sqrt(acc / static_cast<double>(samples.size()));
}

double mean(const std::vector<double>& samples) {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : samples) acc += v;
    return acc / static_cast<double>(samples.size());
}

AudioSignal normalize(const AudioSignal& in, double target_peak) {
    if (in.sample_rate <= 0) throw std::invalid_argument("normalize: sample rate must be positive");
    if (!(target_peak > 0.0)) throw std::invalid_argument("normalize: target peak must be positive");
    for (double v : in.samples)
        if (!std::isfinite(v)) throw std::invalid_argument("normalize: non-finite sample");

    const double peak = peak_abs(in.samples);
    if (peak == 0.0) return in;
    AudioSignal out = in;
    const double gain = target_peak / peak;
    for (double& v : out.samples) v *= gain;
    return out;
}

AudioSignal make_tone(double frequency_hz, double duration_s, int sample_rate, double amplitude,
                      double phase_rad) {
    if (sample_rate <= 0) throw std::invalid_argument("make_tone: sample rate must be positive");
    if (duration_s <= 0.0) throw std::invalid_argument("make_tone: duration must be positive");
    const auto n = static_cast<std::size_t>(duration_s * sample_rate);
    AudioSignal out;
    out.sample_rate = sample_rate;
    out.samples.resize(n);
    const double w = 2.0 * M_PI * frequency_hz / sample_rate;
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = amplitude * std::sin(w * static_cast<double>(i) + phase_rad);
    return out;
}

}  // namespace barogram
