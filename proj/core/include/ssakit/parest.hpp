#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "ssakit/forecasting.hpp"
#include "ssakit/session.hpp"

namespace ssa {

struct Root {
    std::complex<double> value;
    double modulus = 0.0;
    double arg = 0.0;        ///< in (-pi, pi]
    double period = 0.0;     ///< 2 pi / arg, signed; +Inf when arg == 0
    double frequency = 0.0;  ///< arg / (2 pi)
    double damping = 0.0;    ///< ln(modulus)
};

/// Roots ordered by modulus, descending; within a conjugate pair the member
/// with positive imaginary part comes first.
struct RootSet {
    std::vector<Root> roots;

    std::size_t size() const noexcept { return roots.size(); }
    const Root& operator[](std::size_t i) const { return roots.at(i); }
};

Root make_root(std::complex<double> mu);
RootSet make_root_set(const std::vector<std::complex<double>>& values);

/// Roots of mu^p - sum_k a_k mu^{p-k} from the companion-matrix eigenvalues.
RootSet roots(const Lrr& lrr);
RootSet roots(const std::vector<double>& coef);

/// Shift-invariance estimate: eigenvalues of pinv(U without last row) * (U without first row).
RootSet esprit_basis(const Eigen::MatrixXd& U);
RootSet esprit(Session& session, const std::vector<std::size_t>& group);

struct PairEstimate {
    double period = 0.0;
    double frequency = 0.0;
    double dispersion = 0.0;  ///< median absolute deviation of the per-step frequencies
    std::size_t steps = 0;
};

PairEstimate pairs_estimate(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2);
PairEstimate pairs_estimate(Session& session, const std::vector<std::size_t>& pair);

/// Number of eigentriples with lambda_i > tol * lambda_1.
std::size_t series_rank(const Session& session, double tol = 1e-9);

/// modulus, period, frequency, damping, re, im
void write_roots(std::ostream& out, const RootSet& roots);
void write_roots(const std::filesystem::path& path, const RootSet& roots);
/// Fixed-width table for terminals.
void print_roots(std::ostream& out, const RootSet& roots);

}  // namespace ssa
