#include "barogram/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace barogram {

Transcript tokenize(std::string_view text) {
    Transcript out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            out.words.push_back(current);
            current.clear();
        }
    };
    for (char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (std::isspace(u)) {
            flush();
        } else if (std::isalnum(u)) {
            current.push_back(static_cast<char>(std::tolower(u)));
        }
        // other punctuation is dropped
    }
    flush();
    return out;
}

WerBreakdown wer(const Transcript& reference, const Transcript& hypothesis) {
    const std::size_t nr = reference.words.size();
    const std::size_t nh = hypothesis.words.size();
    if (nr == 0) throw std::invalid_argument("wer: empty reference (N must be >= 1)");

    // Full edit-distance table with unit costs.
    std::vector<std::vector<int>> d(nr + 1, std::vector<int>(nh + 1, 0));
    for (std::size_t i = 0; i <= nr; ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= nh; ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= nr; ++i) {
        for (std::size_t j = 1; j <= nh; ++j) {
            const int same = reference.words[i - 1] == hypothesis.words[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j - 1] + same, d[i - 1][j] + 1, d[i][j - 1] + 1});
        }
    }

    // Backtrace; on ties take the diagonal first so a substitution is
    // preferred over a deletion+insertion pair.
    WerBreakdown out;
    out.reference_length = static_cast<int>(nr);
    std::size_t i = nr, j = nh;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const int same = reference.words[i - 1] == hypothesis.words[j - 1] ? 0 : 1;
            if (d[i][j] == d[i - 1][j - 1] + same) {
                out.substitutions += same;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
            ++out.deletions;
            --i;
            continue;
        }
        ++out.insertions;
        --j;
    }
    out.wer = static_cast<double>(out.substitutions + out.deletions + out.insertions) /
              static_cast<double>(nr);
    return out;
}

namespace {
constexpr double kSnrSentinelDb = 300.0;
}

double snr_reference(const AudioSignal& signal, const AudioSignal& reference) {
    if (signal.sample_rate != reference.sample_rate)
        throw std::invalid_argument("snr_reference: sample rates differ");
    if (signal.samples.size() != reference.samples.size())
        throw std::invalid_argument("snr_reference: lengths differ");
    if (signal.samples.empty()) throw std::invalid_argument("snr_reference: empty input");

    double ref_energy = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < reference.samples.size(); ++i) {
        ref_energy += reference.samples[i] * reference.samples[i];
        dot += signal.samples[i] * reference.samples[i];
    }
    if (ref_energy <= 0.0) throw std::invalid_argument("snr_reference: all-zero reference");

    const double g = dot / ref_energy;  // least-squares fit of reference onto signal
    const double fitted_energy = g * g * ref_energy;
    double residual = 0.0;
    for (std::size_t i = 0; i < reference.samples.size(); ++i) {
        const double e = signal.samples[i] - g * reference.samples[i];
        residual += e * e;
    }
    if (fitted_energy <= 0.0) return -kSnrSentinelDb;
    if (residual <= fitted_energy * 1e-30) return kSnrSentinelDb;
    return std::clamp(10.0 * std::log10(fitted_energy / residual), -kSnrSentinelDb,
                      kSnrSentinelDb);
}

double snr_segments(const AudioSignal& signal, const std::vector<bool>& silence_mask) {
    if (signal.samples.size() != silence_mask.size())
        throw std::invalid_argument("snr_segments: mask length differs from signal length");
    if (signal.samples.empty()) throw std::invalid_argument("snr_segments: empty input");

    double speech = 0.0, silence = 0.0;
    std::size_t n_speech = 0, n_silence = 0;
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        const double p = signal.samples[i] * signal.samples[i];
        if (silence_mask[i]) {
            silence += p;
            ++n_silence;
        } else {
            speech += p;
            ++n_speech;
        }
    }
    if (n_speech == 0 || n_silence == 0)
        throw std::invalid_argument("snr_segments: mask must contain both segment classes");
    const double ps = speech / static_cast<double>(n_speech);
    const double pn = silence / static_cast<double>(n_silence);
    if (pn <= 0.0) return kSnrSentinelDb;
    if (ps <= 0.0) return -kSnrSentinelDb;
    return std::clamp(10.0 * std::log10(ps / pn), -kSnrSentinelDb, kSnrSentinelDb);
}

}  // namespace barogram
