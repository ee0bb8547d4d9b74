#pragma once

#include <vector>

#include "barogram/signal.hpp"
#include "barogram/stft.hpp"

namespace barogram {

// Pressure-as-transcript: re-interpret a pressure trace as audio by
// removing the mean (global by default, sliding window if mean_window_s >
// 0). Output keeps the trace's rate; amplitudes stay in pascals until
// normalized downstream.
AudioSignal pat(const PressureTrace& trace, double mean_window_s = 0.0);

struct HpssParams {
    int window_size = 256;
    int hop = 64;
    int time_kernel = 17;  // odd frame count for the harmonic-direction median
    int freq_kernel = 17;  // odd bin count for the percussive-direction median
    int n_iter = 1;
    enum class MaskKind { Ratio, Binary };
    MaskKind mask_kind = MaskKind::Ratio;
    Window window_kind = Window::Hann;
};

struct HpssResult {
    Spectrogram harmonic;
    Spectrogram percussive;
};

// Harmonic/percussive separation: the harmonic envelope is a median across
// time frames (steady tones persist), the percussive envelope a median
// across frequency bins (broadband clicks span bins). Ratio masks satisfy
// M_h + M_p == 1 per cell (0/0 counts as 0.5 each) and both outputs carry
// the original phase.
HpssResult hpss(const AudioSignal& in, const HpssParams& params = {});

// Per-bin mean magnitude over all frames of a noise recording.
NoiseProfile characterize_noise(const AudioSignal& noise, int window_size = 256, int hop = 64,
                                Window window = Window::Hann);

// Magnitude-domain subtraction with a relative floor:
// |Y| = max(|S| - alpha*N, floor*|S|), phase untouched. The profile must
// match the spectrogram's window size and sample rate.
Spectrogram spectral_subtract(const Spectrogram& spec, const NoiseProfile& noise, double alpha,
                              double spectral_floor);

struct SubtractionParams {
    double alpha_harmonic = 1.0;
    double alpha_percussive = 0.3;  // noise estimate downscale for the percussive branch
    double spectral_floor = 0.01;
};

// HPSS split, per-branch spectral subtraction, complex recombination,
// inverse STFT. Output is truncated to the input length.
AudioSignal denoise(const AudioSignal& in, const NoiseProfile& noise,
                    const HpssParams& hpss_params = {}, const SubtractionParams& sub = {});

// Fixed equal-width band gains starting at start_hz; queries above the top
// band clamp to the last gain.
struct EqualizerProfile {
    double band_width_hz = 25.0;
    double start_hz = 0.0;
    double gain_cap = 31.6227766016837933;  // +30 dB
    std::vector<double> gains;

    int band_index(double frequency_hz) const;
    double gain_for(double frequency_hz) const;
    static EqualizerProfile unity(int n_bands = 40, double band_width_hz = 25.0);
};

// Band gains = mean reference magnitude / mean recovered magnitude over
// each band (full-signal FFT, magnitudes normalized by length so the two
// signals may have different rates), clamped to [0, gain_cap]. Bands where
// the recovered magnitude falls below a silence threshold (1e-6 x the
// loudest recovered band) get gain_cap as a sentinel.
EqualizerProfile calibrate_equalizer(const AudioSignal& reference, const AudioSignal& recovered,
                                     int n_bands = 40, double band_width_hz = 25.0,
                                     double start_hz = 0.0,
                                     double gain_cap = 31.6227766016837933);

// STFT-domain application: each bin is scaled by its band's gain.
AudioSignal equalize(const AudioSignal& in, const EqualizerProfile& profile, int window_size = 256,
                     int hop = 64);

struct PipelineConfig {
    double target_peak = 1.0;
    double pat_mean_window_s = 0.0;
    double highpass_cutoff_hz = 40.0;
    int highpass_order = 3;
    HpssParams hpss;
    SubtractionParams subtraction;
    int eq_window_size = 256;
    int eq_hop = 64;
};

// Intermediate products, in pipeline order.
struct PipelineStages {
    AudioSignal pat;         // mean-removed trace
    AudioSignal normalized;  // after peak normalization
    AudioSignal highpassed;
    AudioSignal denoised;
    AudioSignal equalized;
    AudioSignal output;      // final renormalized result
    double normalize_gain = 1.0;
};

// Full reconstruction: pat -> normalize -> highpass -> denoise ->
// equalize -> normalize. The noise profile is expected in trace units
// (pascals, measured on the pat -> highpass path); the pipeline rescales
// it by its own normalization gain before subtracting.
AudioSignal ds1_pipeline(const PressureTrace& trace, const NoiseProfile& noise,
                         const EqualizerProfile& eq, const PipelineConfig& config = {},
                         PipelineStages* stages = nullptr);

}  // namespace barogram
