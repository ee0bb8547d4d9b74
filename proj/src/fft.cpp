#include "barogram/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace barogram::fft {

namespace {
// FFTW's planner is not thread-safe; executing distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("rfft: empty input");
    const std::size_t n = x.size();
    std::vector<double> in(x);
    std::vector<std::complex<double>> out(n / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("rfft: planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& spectrum, std::size_t n) {
    if (n == 0) throw std::invalid_argument("irfft: zero length");
    if (spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("irfft: spectrum size does not match output length");
    std::vector<std::complex<double>> in(spectrum);  // c2r clobbers its input
    std::vector<double> out(n);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("irfft: planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

}  // namespace barogram::fft
