#pragma once

#include <vector>

#include "barogram/signal.hpp"

namespace barogram {

// One second-order section, direct form II transposed, a0 normalized to 1.
struct Biquad {
    double b0 = 0, b1 = 0, b2 = 0;
    double a1 = 0, a2 = 0;
};

// Butterworth design via bilinear transform with cutoff prewarping,
// returned as a cascade of second-order sections (odd orders produce one
// degenerate first-order section). Requires 0 < cutoff_hz < rate_hz/2.
std::vector<Biquad> butterworth_sections(int order, double cutoff_hz, double rate_hz,
                                         bool highpass);

std::vector<double> sosfilt(const std::vector<Biquad>& sections, const std::vector<double>& x);

// Zero-phase forward-backward run of the cascade with odd-reflection edge
// padding to suppress end transients.
std::vector<double> filtfilt(const std::vector<Biquad>& sections, const std::vector<double>& x,
                             double rate_hz, double cutoff_hz);

// Zero-phase Butterworth highpass (defaults: 40 Hz cutoff, order 3).
AudioSignal highpass(const AudioSignal& in, double cutoff_hz = 40.0, int order = 3);

}  // namespace barogram
