#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "barogram/signal.hpp"
#include "barogram/stft.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace barogram;

namespace {

AudioSignal make_signal(std::vector<double> samples, double rate) {
    AudioSignal s;
    s.samples = std::move(samples);
    s.sample_rate = rate;
    return s;
}

}  // namespace

TEST_CASE("frame count covers the tail with zero padding") {
    auto s = make_signal(std::vector<double>(1000, 1.0), 2200.0);
    auto spec = stft(s, 256, 64);
    // ceil((1000 - 256) / 64) = 12 hops after the first frame.
    CHECK(spec.n_frames == 13);
    CHECK(spec.n_bins == 129);
    CHECK(spec.window_size == 256);
    CHECK(spec.hop == 64);
    CHECK(spec.sample_rate == 2200.0);

    auto exact = stft(make_signal(std::vector<double>(256 + 3 * 64, 1.0), 2200.0), 256, 64);
    CHECK(exact.n_frames == 4);
}

TEST_CASE("impulse under a rectangular window yields a flat frame") {
    std::vector<double> x(256, 0.0);
    x[10] = 1.0;
    auto spec = stft(make_signal(x, 2200.0), 256, 64, Window::Rect);
    for (std::size_t k = 0; k < spec.n_bins; ++k)
        CHECK(std::abs(spec.at(0, k)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a 250 Hz tone at 2200 Hz peaks in bin 29") {
    auto tone = make_tone(250.0, 1.0, 2200.0);
    auto spec = stft(tone, 256, 64);
    // 250 / (2200 / 256) = 29.09...
    CHECK(spec.bin_frequency(29) == doctest::Approx(29.0 * 2200.0 / 256.0));
    std::size_t frame = spec.n_frames / 2;
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
        const double m = std::abs(spec.at(frame, k));
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    CHECK(best == 29);
}

TEST_CASE("analysis followed by synthesis restores the interior") {
    auto x = oracle::white_noise(4096, 2024);
    auto s = make_signal(x, 8000.0);
    auto back = istft(stft(s, 256, 64));
    REQUIRE(back.samples.size() >= 4096);
    for (std::size_t i = 256; i + 256 < 4096; ++i)
        CHECK(std::abs(back.samples[i] - x[i]) <= 1e-6);
}

TEST_CASE("round trip also holds for the rectangular window") {
    auto x = oracle::white_noise(2048, 11);
    auto back = istft(stft(make_signal(x, 8000.0), 256, 64, Window::Rect));
    for (std::size_t i = 256; i + 256 < 2048; ++i)
        CHECK(std::abs(back.samples[i] - x[i]) <= 1e-6);
}

TEST_CASE("transform is linear in the input") {
    auto a = oracle::white_noise(1024, 3);
    auto b = oracle::white_noise(1024, 4);
    std::vector<double> mix(1024);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 3.0 * a[i] + b[i];
    auto sa = stft(make_signal(a, 8000.0), 256, 64);
    auto sb = stft(make_signal(b, 8000.0), 256, 64);
    auto sm = stft(make_signal(mix, 8000.0), 256, 64);
    for (std::size_t f = 0; f < sm.n_frames; ++f)
        for (std::size_t k = 0; k < sm.n_bins; ++k)
            CHECK(std::abs(sm.at(f, k) - (3.0 * sa.at(f, k) + sb.at(f, k))) < 1e-9);
}

TEST_CASE("zeroing bins above 500 Hz removes an 800 Hz component") {
    const double rate = 2200.0;
    auto low = make_tone(200.0, 2.0, rate);
    auto high = make_tone(800.0, 2.0, rate);
    AudioSignal mix = low;
    for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] += high.samples[i];

    auto spec = stft(mix, 256, 64);
    for (std::size_t f = 0; f < spec.n_frames; ++f)
        for (std::size_t k = 0; k < spec.n_bins; ++k)
            if (spec.bin_frequency(k) > 500.0) spec.at(f, k) = {0.0, 0.0};
    auto filtered = istft(spec);

    const std::size_t lo = 256, hi = mix.samples.size() - 256;
    CHECK(oracle::correlation(filtered.samples, low.samples, lo, hi) > 0.99);
    CHECK(oracle::correlation(filtered.samples, high.samples, lo, hi) < 0.1);
}

TEST_CASE("an all-zero signal round trips to zero") {
    auto back = istft(stft(make_signal(std::vector<double>(1000, 0.0), 2200.0), 256, 64));
    for (double v : back.samples) CHECK(v == 0.0);
}

TEST_CASE("magnitudes match the complex data") {
    auto spec = stft(make_tone(300.0, 0.5, 2200.0), 128, 32);
    auto mags = spec.magnitudes();
    REQUIRE(mags.size() == spec.data.size());
    for (std::size_t i = 0; i < mags.size(); ++i) CHECK(mags[i] == std::abs(spec.data[i]));
}

TEST_CASE("parameter validation") {
    auto s = make_signal(std::vector<double>(512, 0.0), 2200.0);
    CHECK_THROWS_AS(stft(s, 0, 64), std::invalid_argument);
    CHECK_THROWS_AS(stft(s, 255, 64), std::invalid_argument);  // odd window size
    CHECK_THROWS_AS(stft(s, 256, 0), std::invalid_argument);
    CHECK_THROWS_AS(stft(s, 256, 257), std::invalid_argument);  // hop beyond window
    CHECK_THROWS_AS(stft(make_signal({}, 2200.0), 256, 64), std::invalid_argument);
}

TEST_CASE("synthesis rejects a non-invertible hop") {
    // A hop equal to the window length with a tapered window does not cover
    // the signal evenly, so inversion must refuse rather than distort.
    auto s = make_signal(oracle::white_noise(2048, 8), 8000.0);
    auto spec = stft(s, 256, 256);
    CHECK_THROWS_AS(istft(spec), std::invalid_argument);
    // The rectangular window at the same hop is perfectly invertible.
    auto rect = istft(stft(s, 256, 256, Window::Rect));
    for (std::size_t i = 0; i < 2048; ++i) CHECK(std::abs(rect.samples[i] - s.samples[i]) <= 1e-9);
}
