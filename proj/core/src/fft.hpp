#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ssa::detail {

/// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t good_fft_size(std::size_t n);

/// Real-to-complex / complex-to-real FFTW plan pair for one transform size.
/// Plans are created once per size under a global lock and shared; executing
/// them is thread-safe because every call supplies its own buffers.
class RealFft {
public:
    static std::shared_ptr<const RealFft> get(std::size_t n);

    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    /// in: size() reals; out: spectrum_size() complex values.
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    /// Unnormalized inverse. `in` is used as scratch and overwritten.
    void inverse(std::span<std::complex<double>> in, std::span<double> out) const;

private:
    explicit RealFft(std::size_t n);

    std::size_t n_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace ssa::detail
