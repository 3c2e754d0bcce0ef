#include "ssakit/hankel.hpp"

#include <algorithm>

#include "fft.hpp"
#include "ssakit/errors.hpp"
#include "ssakit/series_io.hpp"

namespace ssa {

namespace {

using cvec = std::vector<std::complex<double>>;

std::vector<double> counts_as_double(const WindowSpec& spec) {
    const auto c = antidiag_counts(spec);
    return {c.begin(), c.end()};
}

// Linear convolution of a and b through a circulant of size fft->size() >=
// |a| + |b| - 1, divided elementwise by the antidiagonal counts.
std::vector<double> averaged_convolution(const detail::RealFft& fft,
                                         const Eigen::Ref<const Eigen::VectorXd>& a,
                                         const Eigen::Ref<const Eigen::VectorXd>& b,
                                         const std::vector<double>& counts) {
    const std::size_t P = fft.size();
    const std::size_t N = counts.size();
    std::vector<double> buf(P, 0.0);
    cvec fa(fft.spectrum_size()), fb(fft.spectrum_size());

    std::copy(a.data(), a.data() + a.size(), buf.begin());
    fft.forward(buf, fa);
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(b.data(), b.data() + b.size(), buf.begin());
    fft.forward(buf, fb);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft.inverse(fa, buf);

    std::vector<double> out(N);
    const double scale = 1.0 / static_cast<double>(P);
    for (std::size_t s = 0; s < N; ++s) out[s] = buf[s] * scale / counts[s];
    return out;
}

}  // namespace

WindowSpec WindowSpec::make(std::size_t N, std::size_t L) {
    if (L <= 1 || L >= N) {
        throw ParameterError("window length L=" + std::to_string(L) + " must satisfy 1 < L < N=" +
                             std::to_string(N));
    }
    return WindowSpec{N, L};
}

std::vector<std::size_t> antidiag_counts(const WindowSpec& spec) {
    const std::size_t N = spec.N;
    const std::size_t L = spec.L;
    const std::size_t K = spec.K();
    std::vector<std::size_t> out(N);
    for (std::size_t s = 1; s <= N; ++s) out[s - 1] = std::min({s, L, K, N - s + 1});
    return out;
}

HankelOperator::HankelOperator(std::span<const double> series, std::size_t L)
    : spec_(WindowSpec::make(series.size(), L)),
      series_(series.begin(), series.end()),
      counts_(counts_as_double(spec_)),
      fft_(detail::RealFft::get(detail::good_fft_size(series.size()))) {
    std::vector<double> padded(fft_->size(), 0.0);
    std::copy(series_.begin(), series_.end(), padded.begin());
    spectrum_.resize(fft_->spectrum_size());
    fft_->forward(padded, spectrum_);
}

std::size_t HankelOperator::circulant_size() const noexcept { return fft_->size(); }

// y(i) = sum_j x(i + j) w(j) for i < out_len, with |w| + out_len - 1 = N.
// Reversing w turns the correlation into the convolution (x * w_rev), whose
// entries offset .. N-1 are unaffected by wrap-around once P >= N.
Eigen::VectorXd HankelOperator::correlate(const Eigen::Ref<const Eigen::VectorXd>& w,
                                          std::size_t offset, std::size_t out_len) const {
    const std::size_t P = fft_->size();
    const auto n = static_cast<std::size_t>(w.size());
    std::vector<double> buf(P, 0.0);
    for (std::size_t j = 0; j < n; ++j) buf[j] = w[static_cast<Eigen::Index>(n - 1 - j)];
    cvec spec(fft_->spectrum_size());
    fft_->forward(buf, spec);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= spectrum_[i];
    fft_->inverse(spec, buf);
    Eigen::VectorXd out(static_cast<Eigen::Index>(out_len));
    const double scale = 1.0 / static_cast<double>(P);
    for (std::size_t i = 0; i < out_len; ++i) out[static_cast<Eigen::Index>(i)] = buf[i + offset] * scale;
    return out;
}

Eigen::VectorXd HankelOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    if (static_cast<std::size_t>(v.size()) != cols()) {
        throw ParameterError("hmatvec: vector length " + std::to_string(v.size()) + " != K=" +
                             std::to_string(cols()));
    }
    return correlate(v, cols() - 1, rows());
}

Eigen::VectorXd HankelOperator::apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (static_cast<std::size_t>(u.size()) != rows()) {
        throw ParameterError("hmatvec_t: vector length " + std::to_string(u.size()) + " != L=" +
                             std::to_string(rows()));
    }
    return correlate(u, rows() - 1, cols());
}

std::vector<double> HankelOperator::hankelize_rank1(const Eigen::Ref<const Eigen::VectorXd>& u,
                                                    const Eigen::Ref<const Eigen::VectorXd>& v) const {
    if (static_cast<std::size_t>(u.size()) != rows() || static_cast<std::size_t>(v.size()) != cols()) {
        throw ParameterError("hankelize_rank1: vectors do not match the window");
    }
    return averaged_convolution(*fft_, u, v, counts_);
}

Eigen::MatrixXd HankelOperator::dense() const { return trajectory_matrix(series_, spec_.L); }

double HankelOperator::frobenius_norm_squared() const {
    double sum = 0.0;
    for (std::size_t s = 0; s < series_.size(); ++s) sum += counts_[s] * series_[s] * series_[s];
    return sum;
}

HankelOperator embed(const TimeSeries& series, std::size_t L) {
    return HankelOperator(series.values(), L);
}

std::vector<double> hankelize_rank1(const Eigen::Ref<const Eigen::VectorXd>& u,
                                    const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (u.size() < 1 || v.size() < 1) throw ParameterError("hankelize_rank1: empty vector");
    const auto L = static_cast<std::size_t>(u.size());
    const auto K = static_cast<std::size_t>(v.size());
    const WindowSpec spec{L + K - 1, L};
    const auto fft = detail::RealFft::get(detail::good_fft_size(spec.N));
    return averaged_convolution(*fft, u, v, counts_as_double(spec));
}

std::vector<double> hankelize_matrix(const Eigen::Ref<const Eigen::MatrixXd>& Y) {
    if (Y.rows() < 1 || Y.cols() < 1) throw ParameterError("hankelize_matrix: empty matrix");
    const auto L = static_cast<std::size_t>(Y.rows());
    const auto K = static_cast<std::size_t>(Y.cols());
    const std::size_t N = L + K - 1;
    std::vector<double> sum(N, 0.0);
    std::vector<double> count(N, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < L; ++l) {
            sum[l + k] += Y(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
            count[l + k] += 1.0;
        }
    }
    for (std::size_t s = 0; s < N; ++s) sum[s] /= count[s];
    return sum;
}

Eigen::MatrixXd trajectory_matrix(std::span<const double> series, std::size_t L) {
    const auto spec = WindowSpec::make(series.size(), L);
    const auto K = spec.K();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < L; ++l) {
            X(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = series[l + k];
        }
    }
    return X;
}

}  // namespace ssa
