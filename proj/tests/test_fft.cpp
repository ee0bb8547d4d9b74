#include <cmath>
#include <complex>
#include <vector>

#include "barogram/fft.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using barogram::fft::irfft;
using barogram::fft::rfft;

TEST_CASE("forward transform matches a naive DFT") {
    for (std::size_t n : {8u, 64u, 255u, 256u, 1000u}) {
        auto x = oracle::white_noise(n, 1234 + n);
        auto fast = rfft(x);
        auto slow = oracle::naive_dft(x);
        REQUIRE(fast.size() == slow.size());
        REQUIRE(fast.size() == n / 2 + 1);
        double scale = 0.0;
        for (auto& v : slow) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < fast.size(); ++k)
            CHECK(std::abs(fast[k] - slow[k]) <= 1e-9 * scale);
    }
}

TEST_CASE("inverse transform restores the input") {
    for (std::size_t n : {2u, 16u, 513u, 2048u}) {
        auto x = oracle::white_noise(n, 77 + n);
        auto back = irfft(rfft(x), n);
        REQUIRE(back.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("pure tone at an exact bin lands in that bin only") {
    const std::size_t n = 256;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::sin(2.0 * M_PI * 16.0 * static_cast<double>(i) / static_cast<double>(n));
    auto spec = rfft(x);
    CHECK(std::abs(spec[16]) == doctest::Approx(static_cast<double>(n) / 2.0).epsilon(1e-9));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (k == 16) continue;
        CHECK(std::abs(spec[k]) < 1e-8);
    }
}

TEST_CASE("constant input concentrates at the zero bin") {
    std::vector<double> x(100, 3.5);
    auto spec = rfft(x);
    CHECK(spec[0].real() == doctest::Approx(350.0));
    CHECK(spec[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) < 1e-9);
}

TEST_CASE("transform is linear") {
    const std::size_t n = 128;
    auto a = oracle::white_noise(n, 5);
    auto b = oracle::white_noise(n, 6);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = 2.0 * a[i] - 0.5 * b[i];
    auto sa = rfft(a);
    auto sb = rfft(b);
    auto sm = rfft(mix);
    for (std::size_t k = 0; k < sm.size(); ++k)
        CHECK(std::abs(sm[k] - (2.0 * sa[k] - 0.5 * sb[k])) < 1e-9);
}
