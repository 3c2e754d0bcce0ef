#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ssa {

class TimeSeries;

namespace detail {
class RealFft;
}

/// Series length N and window length L, with K = N - L + 1 lagged vectors.
struct WindowSpec {
    std::size_t N = 0;
    std::size_t L = 0;

    std::size_t K() const noexcept { return N - L + 1; }
    std::size_t min_dim() const noexcept { return L < K() ? L : K(); }

    /// Validates 1 < L < N.
    static WindowSpec make(std::size_t N, std::size_t L);

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

/// |A_s| for s = 1..N: the number of trajectory-matrix cells on antidiagonal s.
std::vector<std::size_t> antidiag_counts(const WindowSpec& spec);

/// Implicit L x K trajectory (Hankel) matrix X with X(l, k) = x(l + k).
///
/// Only the series and the spectrum of its zero-padded copy are stored, so
/// memory is O(N). Products with X and X^T are linear convolutions evaluated
/// through one circulant of FFT-friendly size P >= N, costing O(N log N)
/// independently of L. Immutable after construction; concurrent products on
/// one operator are safe.
class HankelOperator {
public:
    HankelOperator(std::span<const double> series, std::size_t L);

    const WindowSpec& spec() const noexcept { return spec_; }
    std::size_t rows() const noexcept { return spec_.L; }
    std::size_t cols() const noexcept { return spec_.K(); }
    std::span<const double> series() const noexcept { return series_; }
    /// Antidiagonal multiplicities as doubles (the w-correlation weights).
    const std::vector<double>& weights() const noexcept { return counts_; }
    std::size_t circulant_size() const noexcept;

    /// X * v, v of length K.
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& v) const;
    /// X^T * u, u of length L.
    Eigen::VectorXd apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& u) const;

    /// Diagonal average of u v^T with this operator's window.
    std::vector<double> hankelize_rank1(const Eigen::Ref<const Eigen::VectorXd>& u,
                                        const Eigen::Ref<const Eigen::VectorXd>& v) const;

    /// Explicit trajectory matrix; for tests and the dense backends.
    Eigen::MatrixXd dense() const;

    double frobenius_norm_squared() const;

private:
    Eigen::VectorXd correlate(const Eigen::Ref<const Eigen::VectorXd>& w, std::size_t offset,
                              std::size_t out_len) const;

    WindowSpec spec_;
    std::vector<double> series_;
    std::vector<double> counts_;
    std::shared_ptr<const detail::RealFft> fft_;
    std::vector<std::complex<double>> spectrum_;
};

HankelOperator embed(const TimeSeries& series, std::size_t L);

inline Eigen::VectorXd hmatvec(const HankelOperator& op, const Eigen::Ref<const Eigen::VectorXd>& v) {
    return op.apply(v);
}
inline Eigen::VectorXd hmatvec_t(const HankelOperator& op, const Eigen::Ref<const Eigen::VectorXd>& u) {
    return op.apply_transpose(u);
}

/// FFT diagonal averaging of u v^T for an (L = |u|) x (K = |v|) window.
std::vector<double> hankelize_rank1(const Eigen::Ref<const Eigen::VectorXd>& u,
                                    const Eigen::Ref<const Eigen::VectorXd>& v);

/// Reference diagonal averaging of a dense matrix (direct antidiagonal means).
std::vector<double> hankelize_matrix(const Eigen::Ref<const Eigen::MatrixXd>& Y);

/// Dense L x K trajectory matrix built element by element.
Eigen::MatrixXd trajectory_matrix(std::span<const double> series, std::size_t L);

}  // namespace ssa
