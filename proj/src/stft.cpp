#include "barogram/stft.hpp"

#include <cmath>
#include <stdexcept>

#include "barogram/fft.hpp"

namespace barogram {

std::vector<double> make_window(Window kind, int size) {
    if (size < 2) throw std::invalid_argument("make_window: size must be >= 2");
    std::vector<double> w(static_cast<std::size_t>(size), 1.0);
    if (kind == Window::Hann) {
        // Periodic form: w[0] == 0, sums tile exactly under power-of-two hops.
        for (int i = 0; i < size; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / static_cast<double>(size));
    }
    return w;
}

std::vector<double> Spectrogram::magnitudes() const {
    std::vector<double> mags(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) mags[i] = std::abs(data[i]);
    return mags;
}

Spectrogram stft(const AudioSignal& in, int window_size, int hop, Window window) {
    if (in.sample_rate <= 0) throw std::invalid_argument("stft: sample rate must be positive");
    if (window_size < 2 || window_size % 2 != 0)
        throw std::invalid_argument("stft: window size must be even and >= 2");
    if (hop <= 0 || hop > window_size)
        throw std::invalid_argument("stft: hop must satisfy 0 < hop <= window size");
    const std::size_t n = in.samples.size();
    if (n < static_cast<std::size_t>(window_size))
        throw std::invalid_argument("stft: input shorter than one window");

    const std::size_t overhang = n - static_cast<std::size_t>(window_size);
    const int n_frames = 1 + static_cast<int>((overhang + hop - 1) / hop);

    Spectrogram spec;
    spec.n_frames = n_frames;
    spec.n_bins = window_size / 2 + 1;
    spec.window_size = window_size;
    spec.hop = hop;
    spec.sample_rate = in.sample_rate;
    spec.window_kind = window;
    spec.data.resize(static_cast<std::size_t>(n_frames) * spec.n_bins);

    const std::vector<double> w = make_window(window, window_size);
    std::vector<double> frame(static_cast<std::size_t>(window_size));
    for (int f = 0; f < n_frames; ++f) {
        const std::size_t start = static_cast<std::size_t>(f) * hop;
        for (int i = 0; i < window_size; ++i) {
            const std::size_t idx = start + i;
            frame[i] = idx < n ? in.samples[idx] * w[i] : 0.0;  // zero-pad the tail
        }
        const auto bins = fft::rfft(frame);
        for (int k = 0; k < spec.n_bins; ++k) spec.at(f, k) = bins[k];
    }
    return spec;
}

AudioSignal istft(const Spectrogram& spec) {
    if (spec.n_frames <= 0 || spec.n_bins != spec.window_size / 2 + 1)
        throw std::invalid_argument("istft: malformed spectrogram");
    if (spec.hop <= 0 || spec.hop > spec.window_size)
        throw std::invalid_argument("istft: hop must satisfy 0 < hop <= window size");

    const int W = spec.window_size;
    const int H = spec.hop;
    const std::size_t out_len = static_cast<std::size_t>(spec.n_frames - 1) * H + W;
    const std::vector<double> w = make_window(spec.window_kind, W);

    // Interior weight-sum floor decides whether this window/hop pair can be
    // inverted at all (e.g. Hann with hop == window leaves zero-weight gaps).
    if (spec.n_frames > 1) {
        double min_interior = 1e300;
        for (int m = 0; m < H; ++m) {  // one hop period, fully covered positions
            double acc = 0.0;
            for (int off = m; off < W; off += H) acc += w[off] * w[off];
            min_interior = std::min(min_interior, acc);
        }
        if (min_interior < 1e-9)
            throw std::invalid_argument(
                "istft: window/hop pair leaves zero-weight positions and cannot be inverted");
    }

    std::vector<double> acc(out_len, 0.0);
    std::vector<double> weight(out_len, 0.0);
    std::vector<std::complex<double>> bins(static_cast<std::size_t>(spec.n_bins));
    for (int f = 0; f < spec.n_frames; ++f) {
        for (int k = 0; k < spec.n_bins; ++k) bins[k] = spec.at(f, k);
        const std::vector<double> frame = fft::irfft(bins, static_cast<std::size_t>(W));
        const std::size_t start = static_cast<std::size_t>(f) * H;
        for (int i = 0; i < W; ++i) {
            acc[start + i] += frame[i] * w[i];
            weight[start + i] += w[i] * w[i];
        }
    }
    double max_weight = 0.0;
    for (double v : weight) max_weight = std::max(max_weight, v);
    const double floor = max_weight * 1e-12;
    AudioSignal out;
    out.sample_rate = spec.sample_rate;
    out.samples.resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i)
        out.samples[i] = weight[i] > floor ? acc[i] / weight[i] : 0.0;
    return out;
}

}  // namespace barogram
