#include "barogram/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace barogram {

std::vector<Biquad> butterworth_sections(int order, double cutoff_hz, double rate_hz,
                                         bool highpass) {
    if (order < 1) throw std::invalid_argument("butterworth: order must be >= 1");
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0))
        throw std::invalid_argument("butterworth: cutoff must lie in (0, rate/2)");

    // Prewarped analog cutoff for the bilinear transform s = (1-z^-1)/(1+z^-1).
    const double warped = std::tan(M_PI * cutoff_hz / rate_hz);
    std::vector<Biquad> sections;

    // Conjugate pole pairs of the analog prototype; alpha = -Re(pole).
    for (int k = 0; k < order / 2; ++k) {
        const double theta = M_PI * (2.0 * k + order + 1.0) / (2.0 * order);
        const double alpha = -std::cos(theta);
        const double w2 = warped * warped;
        const double a0 = 1.0 + 2.0 * alpha * warped + w2;
        Biquad s;
        if (highpass) {
            s.b0 = 1.0 / a0;
            s.b1 = -2.0 / a0;
            s.b2 = 1.0 / a0;
        } else {
            s.b0 = w2 / a0;
            s.b1 = 2.0 * w2 / a0;
            s.b2 = w2 / a0;
        }
        s.a1 = (2.0 * w2 - 2.0) / a0;
        s.a2 = (1.0 - 2.0 * alpha * warped + w2) / a0;
        sections.push_back(s);
    }
    if (order % 2 == 1) {  // real pole
        const double a0 = 1.0 + warped;
        Biquad s;
        if (highpass) {
            s.b0 = 1.0 / a0;
            s.b1 = -1.0 / a0;
        } else {
            s.b0 = warped / a0;
            s.b1 = warped / a0;
        }
        s.b2 = 0.0;
        s.a1 = (warped - 1.0) / a0;
        s.a2 = 0.0;
        sections.push_back(s);
    }
    return sections;
}

std::vector<double> sosfilt(const std::vector<Biquad>& sections, const std::vector<double>& x) {
    std::vector<double> y(x);
    for (const Biquad& s : sections) {
        double z1 = 0.0, z2 = 0.0;  // direct form II transposed state
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

std::vector<double> filtfilt(const std::vector<Biquad>& sections, const std::vector<double>& x,
                             double rate_hz, double cutoff_hz) {
    if (x.empty()) return {};
    const std::size_t n = x.size();
    // Odd-reflection padding long enough for the slowest pole to settle.
    const std::size_t want = static_cast<std::size_t>(std::ceil(3.0 * rate_hz / cutoff_hz));
    const std::size_t pad = std::min(n - 1, std::max<std::size_t>(want, 9));

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.back() - x[n - 1 - i]);

    std::vector<double> y = sosfilt(sections, ext);
    std::reverse(y.begin(), y.end());
    y = sosfilt(sections, y);
    std::reverse(y.begin(), y.end());
    return {y.begin() + static_cast<std::ptrdiff_t>(pad),
            y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

AudioSignal highpass(const AudioSignal& in, double cutoff_hz, int order) {
    if (in.sample_rate <= 0) throw std::invalid_argument("highpass: sample rate must be positive");
    const auto sections = butterworth_sections(order, cutoff_hz, in.sample_rate, true);
    AudioSignal out;
    out.sample_rate = in.sample_rate;
    out.samples = filtfilt(sections, in.samples, in.sample_rate, cutoff_hz);
    return out;
}

}  // namespace barogram
