#pragma once

#include <complex>
#include <vector>

#include "barogram/signal.hpp"

namespace barogram {

enum class Window {
    Hann,
    Rect,
};

// Complex one-sided short-time spectrum, row-major [frame][bin].
// n_bins == window_size/2 + 1.
struct Spectrogram {
    std::vector<std::complex<double>> data;
    int n_frames = 0;
    int n_bins = 0;
    int window_size = 0;
    int hop = 0;
    int sample_rate = 0;
    Window window_kind = Window::Hann;

    std::complex<double>& at(int frame, int bin) {
        return data[static_cast<std::size_t>(frame) * n_bins + bin];
    }
    const std::complex<double>& at(int frame, int bin) const {
        return data[static_cast<std::size_t>(frame) * n_bins + bin];
    }
    double bin_frequency(int bin) const {
        return static_cast<double>(bin) * sample_rate / window_size;
    }
    std::vector<double> magnitudes() const;
};

// Per-bin mean magnitude of a stationary noise recording, in the same
// scale as Spectrogram magnitudes for the same window/hop.
struct NoiseProfile {
    std::vector<double> magnitude;  // one entry per bin
    int window_size = 0;
    int sample_rate = 0;
};

std::vector<double> make_window(Window kind, int size);

// Frames start at multiples of hop; the tail is zero-padded to complete the
// last frame. Requires even window_size >= 2, 0 < hop <= window_size, and
// at least one full window of input.
Spectrogram stft(const AudioSignal& in, int window_size, int hop, Window window = Window::Hann);

// Weighted overlap-add inverse: applies the window again on synthesis and
// divides by the summed squared window. Output length is
// (n_frames-1)*hop + window_size. Errors if the window/hop pair leaves
// interior positions with (near) zero weight, since those cannot be
// reconstructed.
AudioSignal istft(const Spectrogram& spec);

}  // namespace barogram
