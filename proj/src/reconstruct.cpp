#include "barogram/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "barogram/fft.hpp"
#include "barogram/filter.hpp"

namespace barogram {

AudioSignal pat(const PressureTrace& trace, double mean_window_s) {
    if (trace.sample_rate <= 0) throw std::invalid_argument("pat: sample rate must be positive");
    if (trace.samples.empty()) throw std::invalid_argument("pat: empty trace");
    if (mean_window_s < 0.0) throw std::invalid_argument("pat: mean window must be >= 0");

    AudioSignal out;
    out.sample_rate = trace.sample_rate;
    const std::size_t n = trace.samples.size();
    out.samples.resize(n);

    if (mean_window_s == 0.0) {
        const double m = mean(trace.samples);
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = trace.samples[i] - m;
        return out;
    }

    // Centered sliding mean via prefix sums; the window shrinks at the edges.
    auto half = static_cast<std::size_t>(mean_window_s * trace.sample_rate / 2.0);
    half = std::max<std::size_t>(half, 1);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + trace.samples[i];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        const double local = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
        out.samples[i] = trace.samples[i] - local;
    }
    return out;
}

namespace {

void validate_hpss_params(const HpssParams& p) {
    if (p.window_size < 2 || p.window_size % 2 != 0)
        throw std::invalid_argument("hpss: window size must be even and >= 2");
    if (p.hop <= 0 || p.hop > p.window_size)
        throw std::invalid_argument("hpss: hop must satisfy 0 < hop <= window size");
    if (p.time_kernel < 3 || p.time_kernel % 2 == 0)
        throw std::invalid_argument("hpss: time kernel must be odd and >= 3");
    if (p.freq_kernel < 3 || p.freq_kernel % 2 == 0)
        throw std::invalid_argument("hpss: freq kernel must be odd and >= 3");
    if (p.n_iter < 1) throw std::invalid_argument("hpss: n_iter must be >= 1");
}

double median_of(std::vector<double>& scratch) {
    const std::size_t mid = scratch.size() / 2;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid),
                     scratch.end());
    return scratch[mid];
}

// The overlap-add synthesis inverts untouched spectra exactly even where a
// single window covers, but those near-zero edge weights amplify the
// leakage that masking or gain changes introduce. Operations that reshape
// spectra therefore run on a reflection-padded copy and discard the
// margins afterwards.
std::size_t edge_pad_amount(int window_size, std::size_t n) {
    // Inputs shorter than one window keep their length so the analysis
    // still rejects them.
    if (window_size <= 0 || n < static_cast<std::size_t>(window_size)) return 0;
    return std::min(static_cast<std::size_t>(window_size), n - 1);
}

AudioSignal reflect_pad(const AudioSignal& in, std::size_t pad) {
    const std::size_t n = in.samples.size();
    AudioSignal out;
    out.sample_rate = in.sample_rate;
    out.samples.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) out.samples.push_back(in.samples[i]);
    out.samples.insert(out.samples.end(), in.samples.begin(), in.samples.end());
    for (std::size_t i = 0; i < pad; ++i) out.samples.push_back(in.samples[n - 2 - i]);
    return out;
}

AudioSignal trim_padding(const AudioSignal& in, std::size_t pad, std::size_t n) {
    AudioSignal out;
    out.sample_rate = in.sample_rate;
    out.samples.assign(in.samples.begin() + static_cast<std::ptrdiff_t>(pad),
                       in.samples.begin() + static_cast<std::ptrdiff_t>(pad + n));
    return out;
}

// Median across frames at each bin (harmonic direction). Out-of-range
// frame indices clamp to the edges (edge replication).
std::vector<double> median_time(const std::vector<double>& mag, int n_frames, int n_bins,
                                int kernel) {
    std::vector<double> out(mag.size());
    const int half = kernel / 2;
    std::vector<double> scratch(static_cast<std::size_t>(kernel));
    for (int k = 0; k < n_bins; ++k) {
        for (int f = 0; f < n_frames; ++f) {
            for (int j = -half; j <= half; ++j) {
                const int fj = std::clamp(f + j, 0, n_frames - 1);
                scratch[static_cast<std::size_t>(j + half)] =
                    mag[static_cast<std::size_t>(fj) * n_bins + k];
            }
            out[static_cast<std::size_t>(f) * n_bins + k] = median_of(scratch);
        }
    }
    return out;
}

// Median across bins within each frame (percussive direction).
std::vector<double> median_freq(const std::vector<double>& mag, int n_frames, int n_bins,
                                int kernel) {
    std::vector<double> out(mag.size());
    const int half = kernel / 2;
    std::vector<double> scratch(static_cast<std::size_t>(kernel));
    for (int f = 0; f < n_frames; ++f) {
        const std::size_t row = static_cast<std::size_t>(f) * n_bins;
        for (int k = 0; k < n_bins; ++k) {
            for (int j = -half; j <= half; ++j) {
                const int kj = std::clamp(k + j, 0, n_bins - 1);
                scratch[static_cast<std::size_t>(j + half)] = mag[row + kj];
            }
            out[row + k] = median_of(scratch);
        }
    }
    return out;
}

}  // namespace

HpssResult hpss(const AudioSignal& in, const HpssParams& params) {
    validate_hpss_params(params);
    Spectrogram spec = stft(in, params.window_size, params.hop, params.window_kind);

    const std::size_t cells = spec.data.size();
    const std::vector<double> mag = spec.magnitudes();
    std::vector<double> mag_h(mag), mag_p(mag);
    std::vector<double> mask_h(cells, 0.5), mask_p(cells, 0.5);

    for (int iter = 0; iter < params.n_iter; ++iter) {
        const std::vector<double> env_h =
            median_time(mag_h, spec.n_frames, spec.n_bins, params.time_kernel);
        const std::vector<double> env_p =
            median_freq(mag_p, spec.n_frames, spec.n_bins, params.freq_kernel);
        for (std::size_t i = 0; i < cells; ++i) {
            const double denom = env_h[i] + env_p[i];
            if (params.mask_kind == HpssParams::MaskKind::Binary) {
                if (env_h[i] > env_p[i]) {
                    mask_h[i] = 1.0;
                } else if (env_h[i] < env_p[i]) {
                    mask_h[i] = 0.0;
                } else {
                    mask_h[i] = 0.5;
                }
            } else {
                mask_h[i] = denom > 0.0 ? env_h[i] / denom : 0.5;
            }
            mask_p[i] = 1.0 - mask_h[i];
        }
        if (iter + 1 < params.n_iter) {  // refine envelopes from the masked magnitudes
            for (std::size_t i = 0; i < cells; ++i) {
                mag_h[i] = mask_h[i] * mag[i];
                mag_p[i] = mask_p[i] * mag[i];
            }
        }
    }

    HpssResult result;
    result.harmonic = spec;
    result.percussive = spec;
    for (std::size_t i = 0; i < cells; ++i) {
        result.harmonic.data[i] = spec.data[i] * mask_h[i];
        result.percussive.data[i] = spec.data[i] * mask_p[i];
    }
    return result;
}

NoiseProfile characterize_noise(const AudioSignal& noise, int window_size, int hop,
                                Window window) {
    Spectrogram spec = stft(noise, window_size, hop, window);
    NoiseProfile profile;
    profile.window_size = window_size;
    profile.sample_rate = noise.sample_rate;
    profile.magnitude.assign(static_cast<std::size_t>(spec.n_bins), 0.0);
    for (int f = 0; f < spec.n_frames; ++f)
        for (int k = 0; k < spec.n_bins; ++k) profile.magnitude[k] += std::abs(spec.at(f, k));
    for (double& v : profile.magnitude) v /= spec.n_frames;
    return profile;
}

Spectrogram spectral_subtract(const Spectrogram& spec, const NoiseProfile& noise, double alpha,
                              double spectral_floor) {
    if (noise.window_size != spec.window_size)
        throw std::invalid_argument("spectral_subtract: window size mismatch with noise profile");
    if (noise.sample_rate != spec.sample_rate)
        throw std::invalid_argument("spectral_subtract: sample rate mismatch with noise profile");
    if (noise.magnitude.size() != static_cast<std::size_t>(spec.n_bins))
        throw std::invalid_argument("spectral_subtract: bin count mismatch with noise profile");
    if (!(alpha >= 0.0)) throw std::invalid_argument("spectral_subtract: alpha must be >= 0");
    if (!(spectral_floor >= 0.0 && spectral_floor <= 1.0))
        throw std::invalid_argument("spectral_subtract: floor must lie in [0, 1]");

    Spectrogram out = spec;
    for (int f = 0; f < spec.n_frames; ++f) {
        for (int k = 0; k < spec.n_bins; ++k) {
            const std::complex<double> v = spec.at(f, k);
            const double m = std::abs(v);
            if (m == 0.0) continue;
            const double target =
                std::max(m - alpha * noise.magnitude[static_cast<std::size_t>(k)],
                         spectral_floor * m);
            out.at(f, k) = v * (target / m);
        }
    }
    return out;
}

AudioSignal denoise(const AudioSignal& in, const NoiseProfile& noise,
                    const HpssParams& hpss_params, const SubtractionParams& sub) {
    const std::size_t n = in.samples.size();
    const std::size_t pad = edge_pad_amount(hpss_params.window_size, n);
    HpssResult split = hpss(reflect_pad(in, pad), hpss_params);
    const Spectrogram sub_h =
        spectral_subtract(split.harmonic, noise, sub.alpha_harmonic, sub.spectral_floor);
    const Spectrogram sub_p =
        spectral_subtract(split.percussive, noise, sub.alpha_percussive, sub.spectral_floor);

    Spectrogram combined = sub_h;
    for (std::size_t i = 0; i < combined.data.size(); ++i) combined.data[i] += sub_p.data[i];

    return trim_padding(istft(combined), pad, n);
}

int EqualizerProfile::band_index(double frequency_hz) const {
    if (gains.empty()) throw std::invalid_argument("equalizer profile: no bands");
    const double rel = (frequency_hz - start_hz) / band_width_hz;
    const auto idx = static_cast<long>(std::floor(rel));
    return static_cast<int>(std::clamp<long>(idx, 0, static_cast<long>(gains.size()) - 1));
}

double EqualizerProfile::gain_for(double frequency_hz) const {
    return gains[static_cast<std::size_t>(band_index(frequency_hz))];
}

EqualizerProfile EqualizerProfile::unity(int n_bands, double band_width_hz) {
    EqualizerProfile p;
    p.band_width_hz = band_width_hz;
    p.gains.assign(static_cast<std::size_t>(n_bands), 1.0);
    return p;
}

namespace {

// Length-normalized band-mean magnitudes of a full-signal FFT, so signals
// of different rates and durations compare on equal footing.
std::vector<double> band_mean_magnitudes(const AudioSignal& sig, int n_bands,
                                         double band_width_hz, double start_hz) {
    const auto spec = fft::rfft(sig.samples);
    const double n = static_cast<double>(sig.samples.size());
    std::vector<double> sums(static_cast<std::size_t>(n_bands), 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bands), 0);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * sig.sample_rate / n;
        const double rel = (f - start_hz) / band_width_hz;
        if (rel < 0.0) continue;
        const auto b = static_cast<std::size_t>(rel);
        if (b >= sums.size()) continue;
        sums[b] += std::abs(spec[k]) / n;
        counts[b] += 1;
    }
    for (std::size_t b = 0; b < sums.size(); ++b)
        if (counts[b] > 0) sums[b] /= static_cast<double>(counts[b]);
    return sums;
}

}  // namespace

EqualizerProfile calibrate_equalizer(const AudioSignal& reference, const AudioSignal& recovered,
                                     int n_bands, double band_width_hz, double start_hz,
                                     double gain_cap) {
    if (n_bands < 1) throw std::invalid_argument("calibrate_equalizer: need at least one band");
    if (!(band_width_hz > 0.0))
        throw std::invalid_argument("calibrate_equalizer: band width must be positive");
    if (!(gain_cap > 0.0))
        throw std::invalid_argument("calibrate_equalizer: gain cap must be positive");
    if (reference.samples.empty() || recovered.samples.empty())
        throw std::invalid_argument("calibrate_equalizer: empty input");
    if (reference.sample_rate <= 0 || recovered.sample_rate <= 0)
        throw std::invalid_argument("calibrate_equalizer: sample rates must be positive");

    const std::vector<double> ref = band_mean_magnitudes(reference, n_bands, band_width_hz, start_hz);
    const std::vector<double> rec = band_mean_magnitudes(recovered, n_bands, band_width_hz, start_hz);

    double rec_max = 0.0;
    for (double v : rec) rec_max = std::max(rec_max, v);
    const double silence_threshold = rec_max * 1e-6;

    EqualizerProfile profile;
    profile.band_width_hz = band_width_hz;
    profile.start_hz = start_hz;
    profile.gain_cap = gain_cap;
    profile.gains.resize(static_cast<std::size_t>(n_bands));
    for (std::size_t b = 0; b < profile.gains.size(); ++b) {
        if (rec[b] <= silence_threshold) {
            profile.gains[b] = gain_cap;  // silent band sentinel
        } else {
            profile.gains[b] = std::clamp(ref[b] / rec[b], 0.0, gain_cap);
        }
    }
    return profile;
}

AudioSignal equalize(const AudioSignal& in, const EqualizerProfile& profile, int window_size,
                     int hop) {
    if (profile.gains.empty()) throw std::invalid_argument("equalize: profile has no bands");
    if (!(profile.band_width_hz > 0.0))
        throw std::invalid_argument("equalize: band width must be positive");

    const std::size_t n = in.samples.size();
    const std::size_t pad = edge_pad_amount(window_size, n);
    Spectrogram spec = stft(reflect_pad(in, pad), window_size, hop);
    for (int k = 0; k < spec.n_bins; ++k) {
        const double gain = profile.gain_for(spec.bin_frequency(k));
        for (int f = 0; f < spec.n_frames; ++f) spec.at(f, k) *= gain;
    }
    return trim_padding(istft(spec), pad, n);
}

AudioSignal ds1_pipeline(const PressureTrace& trace, const NoiseProfile& noise,
                         const EqualizerProfile& eq, const PipelineConfig& config,
                         PipelineStages* stages) {
    if (noise.sample_rate != trace.sample_rate)
        throw std::invalid_argument("ds1_pipeline: trace and noise profile sample rates differ");
    if (noise.window_size != config.hpss.window_size)
        throw std::invalid_argument(
            "ds1_pipeline: noise profile window size does not match the configured analysis window");

    AudioSignal stage = pat(trace, config.pat_mean_window_s);
    if (stages) stages->pat = stage;

    const double peak = peak_abs(stage.samples);
    const double gain = peak > 0.0 ? config.target_peak / peak : 1.0;
    for (double& v : stage.samples) v *= gain;
    if (stages) {
        stages->normalized = stage;
        stages->normalize_gain = gain;
    }

    stage = highpass(stage, config.highpass_cutoff_hz, config.highpass_order);
    if (stages) stages->highpassed = stage;

    // The profile is measured in trace units; bring it into the normalized
    // scale the signal now lives in.
    NoiseProfile scaled = noise;
    for (double& v : scaled.magnitude) v *= gain;

    stage = denoise(stage, scaled, config.hpss, config.subtraction);
    if (stages) stages->denoised = stage;

    stage = equalize(stage, eq, config.eq_window_size, config.eq_hop);
    if (stages) stages->equalized = stage;

    stage = normalize(stage, config.target_peak);
    if (stages) stages->output = stage;
    return stage;
}

}  // namespace barogram
