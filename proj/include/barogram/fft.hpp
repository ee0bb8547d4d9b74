#pragma once

#include <complex>
#include <vector>

namespace barogram::fft {

// One-sided real FFT. Returns n/2+1 unnormalized bins (n may be odd, in
// which case (n+1)/2 bins come back; callers here always use even n).
std::vector<std::complex<double>> rfft(const std::vector<double>& x);

// Inverse of rfft for a length-n real output; normalizes by 1/n.
std::vector<double> irfft(const std::vector<std::complex<double>>& spectrum, std::size_t n);

}  // namespace barogram::fft
