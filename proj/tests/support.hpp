#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

inline std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Dense trajectory matrix written directly from the definition X(l, k) = x(l + k).
inline Eigen::MatrixXd naive_trajectory(const std::vector<double>& x, std::size_t L) {
    const std::size_t K = x.size() - L + 1;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(K));
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < K; ++k) X(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = x[l + k];
    return X;
}

/// Antidiagonal averaging by explicit accumulation.
inline std::vector<double> naive_hankelize(const Eigen::MatrixXd& Y) {
    const auto L = static_cast<std::size_t>(Y.rows());
    const auto K = static_cast<std::size_t>(Y.cols());
    std::vector<double> sum(L + K - 1, 0.0), cnt(L + K - 1, 0.0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < K; ++k) {
            sum[l + k] += Y(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
            cnt[l + k] += 1.0;
        }
    for (std::size_t s = 0; s < sum.size(); ++s) sum[s] /= cnt[s];
    return sum;
}

/// Analytic finite-rank term c * n^p * rho^n * cos(2 pi w n + phi), n = 1-based.
struct Term {
    double c = 1.0;
    int poly = 0;
    double rho = 1.0;
    double freq = 0.0;
    double phase = 0.0;

    double at(double n) const {
        return c * std::pow(n, poly) * std::pow(rho, n) * std::cos(2.0 * std::numbers::pi * freq * n + phase);
    }
    /// Number of characteristic roots this term contributes.
    int rank() const { return (poly + 1) * ((freq > 0.0 && freq < 0.5) ? 2 : 1); }
};

inline std::vector<double> signal(const std::vector<Term>& terms, std::size_t first, std::size_t count) {
    std::vector<double> x(count, 0.0);
    for (std::size_t i = 0; i < count; ++i)
        for (const auto& t : terms) x[i] += t.at(static_cast<double>(first + i));
    return x;
}

inline int total_rank(const std::vector<Term>& terms) {
    int r = 0;
    for (const auto& t : terms) r += t.rank();
    return r;
}

}  // namespace testing
