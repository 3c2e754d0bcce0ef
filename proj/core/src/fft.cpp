#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "ssakit/errors.hpp"

namespace ssa::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::size_t good_fft_size(std::size_t n) {
    if (n <= 1) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u, 7u}) {
            while (r % p == 0) r /= p;
        }
        if (r == 1) return m;
    }
}

RealFft::RealFft(std::size_t n) : n_(n) {
    // Planning with FFTW_ESTIMATE keeps the chosen algorithm, and therefore
    // every rounding error, identical from run to run.
    std::vector<double> re(n);
    std::vector<fftw_complex> co(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int size = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_r2c_1d(size, re.data(), co.data(), flags);
    inverse_plan_ = fftw_plan_dft_c2r_1d(size, co.data(), re.data(), flags | FFTW_DESTROY_INPUT);
    if (!forward_plan_ || !inverse_plan_) throw NumericalError("FFTW planning failed");
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const RealFft> RealFft::get(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    static std::map<std::size_t, std::weak_ptr<const RealFft>> cache;
    if (auto hit = cache[n].lock()) return hit;
    std::shared_ptr<const RealFft> made(new RealFft(n), [](const RealFft* p) { delete p; });
    cache[n] = made;
    return made;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<std::complex<double>> in, std::span<double> out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                         reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace ssa::detail
