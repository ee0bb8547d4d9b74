#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "barogram/metrics.hpp"
#include "barogram/signal.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace barogram;

TEST_CASE("tokenizer lowercases, strips punctuation, splits on whitespace") {
    auto t = tokenize("All good things come to an end.");
    REQUIRE(t.words.size() == 7);
    CHECK(t.words[0] == "all");
    CHECK(t.words[1] == "good");
    CHECK(t.words[2] == "things");
    CHECK(t.words[3] == "come");
    CHECK(t.words[4] == "to");
    CHECK(t.words[5] == "an");
    CHECK(t.words[6] == "end");

    CHECK(tokenize("").words.empty());
    CHECK(tokenize("  \t \n ").words.empty());

    auto digits = tokenize("7 5 6 2 3");
    REQUIRE(digits.words.size() == 5);
    CHECK(digits.words[0] == "7");
    CHECK(digits.words[4] == "3");

    auto mixed = tokenize("Here's   MY pass-word!");
    REQUIRE(mixed.words.size() == 3);
    CHECK(mixed.words[0] == "heres");
    CHECK(mixed.words[1] == "my");
    CHECK(mixed.words[2] == "password");
}

TEST_CASE("identical transcripts have zero error") {
    auto ref = tokenize("open the pod bay doors");
    auto b = wer(ref, ref);
    CHECK(b.substitutions == 0);
    CHECK(b.deletions == 0);
    CHECK(b.insertions == 0);
    CHECK(b.reference_length == 5);
    CHECK(b.wer == 0.0);
}

TEST_CASE("a truncated hypothesis counts pure deletions") {
    auto ref = tokenize("all good things come to an end");
    auto hyp = tokenize("all good things");
    auto b = wer(ref, hyp);
    CHECK(b.deletions == 4);
    CHECK(b.substitutions == 0);
    CHECK(b.insertions == 0);
    CHECK(b.reference_length == 7);
    CHECK(b.wer == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("a single changed word is one substitution") {
    auto b = wer(tokenize("a b c"), tokenize("a x c"));
    CHECK(b.substitutions == 1);
    CHECK(b.deletions == 0);
    CHECK(b.insertions == 0);
    CHECK(b.wer == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("an empty hypothesis is all deletions with error rate one") {
    auto ref = tokenize("one two three");
    auto b = wer(ref, Transcript{});
    CHECK(b.deletions == 3);
    CHECK(b.wer == 1.0);
}

TEST_CASE("extra words count as insertions") {
    auto b = wer(tokenize("a b"), tokenize("a x b y"));
    CHECK(b.insertions == 2);
    CHECK(b.substitutions == 0);
    CHECK(b.deletions == 0);
    CHECK(b.wer == doctest::Approx(1.0));
}

TEST_CASE("error rate can exceed one") {
    auto b = wer(tokenize("a"), tokenize("x y z"));
    CHECK(b.wer > 1.0);
}

TEST_CASE("an empty reference is rejected") {
    CHECK_THROWS_WITH_AS(wer(Transcript{}, tokenize("a")), doctest::Contains("N must be >= 1"),
                         std::invalid_argument);
}

TEST_CASE("total edit count matches an independent Levenshtein oracle") {
    std::mt19937_64 rng(2024);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 2000; ++trial) {
        Transcript ref, hyp;
        const auto n = 1 + rng() % 8;
        const auto m = rng() % 9;
        for (std::size_t i = 0; i < n; ++i) ref.words.push_back(vocab[rng() % vocab.size()]);
        for (std::size_t i = 0; i < m; ++i) hyp.words.push_back(vocab[rng() % vocab.size()]);
        auto b = wer(ref, hyp);
        const int expected = oracle::levenshtein(ref.words, hyp.words);
        CHECK(b.substitutions + b.deletions + b.insertions == expected);
        CHECK(b.wer == doctest::Approx(static_cast<double>(expected) / static_cast<double>(n)));
        CHECK(b.substitutions >= 0);
        CHECK(b.deletions >= 0);
        CHECK(b.insertions >= 0);
    }
}

TEST_CASE("matching signals hit the sentinel") {
    auto tone = make_tone(200.0, 1.0, 8000);
    CHECK(snr_reference(tone, tone) == 300.0);
    AudioSignal doubled = tone;
    for (double& v : doubled.samples) v *= 2.0;
    CHECK(snr_reference(doubled, tone) == 300.0);
}

TEST_CASE("known noise level reproduces the nominal ratio") {
    // Reference sine at RMS 1/sqrt(2); noise variance chosen for 10 dB.
    const int rate = 8000;
    auto ref = make_tone(200.0, 10.0, rate);
    const double sig_power = 0.5;
    const double noise_power = sig_power / 10.0;  // 10 dB down
    auto noise = oracle::white_noise(ref.samples.size(), 555, std::sqrt(noise_power));
    AudioSignal noisy = ref;
    for (std::size_t i = 0; i < noisy.samples.size(); ++i) noisy.samples[i] += noise[i];
    CHECK(snr_reference(noisy, ref) == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("reference SNR is scale-invariant and monotone in noise power") {
    const int rate = 8000;
    auto ref = make_tone(150.0, 4.0, rate);
    auto noise = oracle::white_noise(ref.samples.size(), 7, 0.1);
    AudioSignal noisy = ref;
    for (std::size_t i = 0; i < noisy.samples.size(); ++i) noisy.samples[i] += noise[i];

    AudioSignal scaled = noisy;
    for (double& v : scaled.samples) v *= 3.7;
    CHECK(snr_reference(scaled, ref) == doctest::Approx(snr_reference(noisy, ref)).epsilon(1e-9));

    double prev = 1e300;
    for (double sigma : {0.05, 0.1, 0.2, 0.4}) {
        auto n2 = oracle::white_noise(ref.samples.size(), 7, sigma);
        AudioSignal s = ref;
        for (std::size_t i = 0; i < s.samples.size(); ++i) s.samples[i] += n2[i];
        const double snr = snr_reference(s, ref);
        CHECK(snr < prev);
        prev = snr;
    }
}

TEST_CASE("reference SNR validates its inputs") {
    auto tone = make_tone(200.0, 0.5, 8000);
    AudioSignal zero;
    zero.sample_rate = 8000;
    zero.samples.assign(tone.samples.size(), 0.0);
    CHECK_THROWS_AS(snr_reference(tone, zero), std::invalid_argument);
    AudioSignal shorter = tone;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(snr_reference(shorter, tone), std::invalid_argument);
    AudioSignal other_rate = tone;
    other_rate.sample_rate = 4000;
    CHECK_THROWS_AS(snr_reference(other_rate, tone), std::invalid_argument);
}

TEST_CASE("segment SNR matches its definition") {
    AudioSignal s;
    s.sample_rate = 1000;
    std::vector<bool> silence;
    // 100 speech samples at amplitude 10, 100 silence samples at amplitude 1.
    for (int i = 0; i < 100; ++i) {
        s.samples.push_back(10.0);
        silence.push_back(false);
    }
    for (int i = 0; i < 100; ++i) {
        s.samples.push_back(1.0);
        silence.push_back(true);
    }
    CHECK(snr_segments(s, silence) == doctest::Approx(20.0).epsilon(1e-9));

    AudioSignal flat;
    flat.sample_rate = 1000;
    flat.samples.assign(50, 2.0);
    std::vector<bool> mask(50, false);
    for (int i = 0; i < 25; ++i) mask[i] = true;
    CHECK(snr_segments(flat, mask) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("segment SNR on tone bursts lands near the constructed truth") {
    const int rate = 8000;
    const std::size_t n = 8 * rate;
    AudioSignal s;
    s.sample_rate = rate;
    s.samples.assign(n, 0.0);
    std::vector<bool> silence(n, true);
    auto noise = oracle::white_noise(n, 99, 0.01);
    for (std::size_t i = 0; i < n; ++i) s.samples[i] = noise[i];
    // One-second bursts of a 0.1-amplitude tone on even seconds.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t second = i / rate;
        if (second % 2 == 0) {
            const double t = static_cast<double>(i) / rate;
            s.samples[i] += 0.1 * std::sin(2.0 * M_PI * 250.0 * t);
            silence[i] = false;
        }
    }
    // Speech power = tone + noise; truth = 10*log10((0.005 + 1e-4)/1e-4).
    const double truth = 10.0 * std::log10((0.5 * 0.1 * 0.1 + 1e-4) / 1e-4);
    CHECK(snr_segments(s, silence) == doctest::Approx(truth).epsilon(0.06));
}

TEST_CASE("segment SNR requires both classes") {
    AudioSignal s;
    s.sample_rate = 1000;
    s.samples.assign(10, 1.0);
    CHECK_THROWS_AS(snr_segments(s, std::vector<bool>(10, true)), std::invalid_argument);
    CHECK_THROWS_AS(snr_segments(s, std::vector<bool>(10, false)), std::invalid_argument);
    CHECK_THROWS_AS(snr_segments(s, std::vector<bool>(9, true)), std::invalid_argument);
}
