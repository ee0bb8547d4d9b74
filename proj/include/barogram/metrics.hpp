#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "barogram/signal.hpp"

namespace barogram {

struct Transcript {
    std::vector<std::string> words;
};

// Lowercase, strip non-alphanumeric characters, split on whitespace; empty
// chunks disappear.
Transcript tokenize(std::string_view text);

struct WerBreakdown {
    int substitutions = 0;
    int deletions = 0;
    int insertions = 0;
    int reference_length = 0;
    double wer = 0.0;  // (S + D + I) / reference_length
};

// Word error rate via minimum-edit alignment with unit costs; ties prefer
// substitutions over deletion+insertion pairs. Empty reference is an
// error; empty hypothesis gives WER 1 (all deletions).
WerBreakdown wer(const Transcript& reference, const Transcript& hypothesis);

// Reference-based SNR: 10*log10(||g*ref||^2 / ||signal - g*ref||^2) with g
// the least-squares gain fitting the reference to the signal. Invariant to
// positive scaling of either argument; an exact (scaled) match returns the
// +300 dB sentinel and the result is clamped to [-300, 300]. Lengths and
// rates must match; an all-zero reference is an error.
double snr_reference(const AudioSignal& signal, const AudioSignal& reference);

// Segment-based SNR: 10*log10(mean speech power / mean silence power)
// where silence_mask marks silence samples. Both segment classes must be
// non-empty; all-zero silence returns the +300 dB sentinel.
double snr_segments(const AudioSignal& signal, const std::vector<bool>& silence_mask);

}  // namespace barogram
