#include "ssakit/parest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ssakit/errors.hpp"
#include "ssakit/reconstruction.hpp"

namespace ssa {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Root make_root(std::complex<double> mu) {
    Root r;
    r.value = mu;
    r.modulus = std::abs(mu);
    if (mu.imag() == 0.0) {
        r.arg = mu.real() < 0.0 ? std::numbers::pi : 0.0;
    } else {
        r.arg = std::arg(mu);
    }
    r.period = r.arg == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 * std::numbers::pi / r.arg;
    r.frequency = r.arg / (2.0 * std::numbers::pi);
    r.damping = std::log(r.modulus);
    return r;
}

RootSet make_root_set(const std::vector<std::complex<double>>& values) {
    RootSet out;
    out.roots.reserve(values.size());
    for (const auto& v : values) out.roots.push_back(make_root(v));
    std::stable_sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
        if (a.modulus != b.modulus) return a.modulus > b.modulus;
        return a.value.imag() > b.value.imag();
    });
    return out;
}

namespace {

std::vector<std::complex<double>> eigenvalues(const MatrixXd& A) {
    Eigen::EigenSolver<MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(A.rows()));
    for (Index i = 0; i < A.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
}

}  // namespace

RootSet roots(const std::vector<double>& coef) {
    const auto p = static_cast<Index>(coef.size());
    if (p < 1) throw ParameterError("LRR must have at least one coefficient");
    for (double a : coef) {
        if (!std::isfinite(a)) throw ValidationError("non-finite LRR coefficient");
    }
    if (p == 1) return make_root_set({std::complex<double>(coef[0], 0.0)});
    MatrixXd C = MatrixXd::Zero(p, p);
    for (Index k = 0; k < p; ++k) C(0, k) = coef[static_cast<std::size_t>(k)];
    for (Index k = 1; k < p; ++k) C(k, k - 1) = 1.0;
    return make_root_set(eigenvalues(C));
}

RootSet roots(const Lrr& lrr) { return roots(lrr.coef); }

RootSet esprit_basis(const MatrixXd& U) {
    const Index L = U.rows();
    const Index r = U.cols();
    if (r < 1) throw ParameterError("ESPRIT needs a nonempty group");
    if (L < r + 1) throw ParameterError("ESPRIT needs L >= group size + 1");
    const MatrixXd lower = U.topRows(L - 1);
    const MatrixXd upper = U.bottomRows(L - 1);
    Eigen::JacobiSVD<MatrixXd> svd(lower, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& s = svd.singularValues();
    if (!(s[r - 1] > 1e-12 * s[0])) {
        throw NumericalError("ESPRIT: truncated eigenvector matrix is rank deficient");
    }
    const MatrixXd Z = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose() * upper;
    return make_root_set(eigenvalues(Z));
}

RootSet esprit(Session& session, const std::vector<std::size_t>& group) {
    ensure_computed(session, Grouping::single(group));
    MatrixXd U(static_cast<Index>(session.spec().L), static_cast<Index>(group.size()));
    for (std::size_t j = 0; j < group.size(); ++j) U.col(static_cast<Index>(j)) = session.eigenvector(group[j] - 1);
    return esprit_basis(U);
}

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PairEstimate pairs_estimate(const VectorXd& u1, const VectorXd& u2) {
    if (u1.size() != u2.size() || u1.size() < 2) throw ParameterError("pairs: vectors of unequal or short length");
    const Index L = u1.size();
    double scale = 0.0;
    for (Index i = 0; i < L; ++i) scale = std::max(scale, std::hypot(u1[i], u2[i]));
    std::vector<double> freq;
    for (Index i = 0; i + 1 < L; ++i) {
        const double n0 = std::hypot(u1[i], u2[i]);
        const double n1 = std::hypot(u1[i + 1], u2[i + 1]);
        if (!(n0 > 1e-14 * scale) || !(n1 > 1e-14 * scale)) continue;
        const double cross = u1[i] * u2[i + 1] - u2[i] * u1[i + 1];
        const double dot = u1[i] * u1[i + 1] + u2[i] * u2[i + 1];
        freq.push_back(std::atan2(std::abs(cross), dot) / (2.0 * std::numbers::pi));
    }
    if (freq.empty()) throw NumericalError("pairs: every eigenvector step had zero length");
    PairEstimate out;
    out.steps = freq.size();
    out.frequency = median_of(freq);
    std::vector<double> dev(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) dev[i] = std::abs(freq[i] - out.frequency);
    out.dispersion = median_of(std::move(dev));
    out.period = out.frequency > 0.0 ? 1.0 / out.frequency : std::numeric_limits<double>::infinity();
    return out;
}

PairEstimate pairs_estimate(Session& session, const std::vector<std::size_t>& pair) {
    if (pair.size() != 2) throw ParameterError("pairs method needs exactly two eigentriples");
    if (pair[0] == pair[1]) throw ParameterError("pairs method needs two distinct eigentriples");
    ensure_computed(session, Grouping::single(pair));
    return pairs_estimate(session.eigenvector(pair[0] - 1), session.eigenvector(pair[1] - 1));
}

std::size_t series_rank(const Session& session, double tol) {
    const auto& lambda = session.triples().lambda;
    if (lambda.empty() || !(lambda[0] > 0.0)) return 0;
    const double cut = tol * lambda[0];
    return static_cast<std::size_t>(std::count_if(lambda.begin(), lambda.end(), [cut](double l) { return l > cut; }));
}

void write_roots(std::ostream& out, const RootSet& roots) {
    out << "modulus,period,frequency,damping,re,im\n";
    for (const auto& r : roots.roots) {
        out << format_double(r.modulus) << ',' << format_double(r.period) << ','
            << format_double(r.frequency) << ',' << format_double(r.damping) << ','
            << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << '\n';
    }
}

void write_roots(const std::filesystem::path& path, const RootSet& roots) {
    std::ostringstream buf;
    write_roots(buf, roots);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << buf.str();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void print_roots(std::ostream& out, const RootSet& roots) {
    std::ostringstream s;
    s << std::setw(4) << "#" << std::setw(12) << "modulus" << std::setw(14) << "period" << std::setw(12)
      << "frequency" << std::setw(12) << "damping" << '\n';
    s << std::fixed;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& r = roots[i];
        s << std::setw(4) << i + 1 << std::setw(12) << std::setprecision(6) << r.modulus << std::setw(14);
        if (std::isinf(r.period)) {
            s << "Inf";
        } else {
            s << r.period;
        }
        s << std::setw(12) << r.frequency << std::setw(12) << r.damping << '\n';
    }
    out << s.str();
}

}  // namespace ssa
