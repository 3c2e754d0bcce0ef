#include "ssakit/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ssakit/errors.hpp"
#include "ssakit/hankel.hpp"

namespace ssa {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Two passes of classical Gram-Schmidt against the first `count` columns.
void orthogonalize(VectorXd& x, const MatrixXd& basis, Index count) {
    if (count <= 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const auto B = basis.leftCols(count);
        x.noalias() -= B * (B.transpose() * x);
    }
}

void orthogonalize_locked(VectorXd& x, const MatrixXd* locked) {
    if (!locked || locked->cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) x.noalias() -= *locked * (locked->transpose() * x);
}

VectorXd random_unit(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v / v.norm();
}

// Fresh direction orthogonal to basis[:, :count] (and to `locked`), used on
// breakdown when the Krylov space became invariant.
VectorXd random_orthogonal(Index n, const MatrixXd& basis, Index count, const MatrixXd* locked,
                           std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        VectorXd v = random_unit(n, rng);
        orthogonalize(v, basis, count);
        orthogonalize_locked(v, locked);
        const double nv = v.norm();
        if (nv > 1e-8) return v / nv;
    }
    return VectorXd::Zero(n);
}

}  // namespace

LinearOperator as_operator(const HankelOperator& op) {
    return LinearOperator{op.rows(), op.cols(),
                          [&op](const VectorXd& x) { return op.apply(x); },
                          [&op](const VectorXd& y) { return op.apply_transpose(y); }};
}

LinearOperator as_operator(const MatrixXd& A) {
    return LinearOperator{static_cast<std::size_t>(A.rows()), static_cast<std::size_t>(A.cols()),
                          [&A](const VectorXd& x) { return VectorXd(A * x); },
                          [&A](const VectorXd& y) { return VectorXd(A.transpose() * y); }};
}

TruncatedSvd lanczos_svd(const LinearOperator& A, const LanczosOptions& options,
                         const MatrixXd* locked) {
    const auto m = static_cast<Index>(A.rows);
    const auto n = static_cast<Index>(A.cols);
    const Index p = locked ? locked->cols() : 0;
    const auto k = static_cast<Index>(options.neig);
    const Index max_dim = std::min(m - p, n);

    if (k < 1) throw ParameterError("lanczos: neig must be positive");
    if (k > max_dim) {
        throw ParameterError("lanczos: neig=" + std::to_string(k) + " exceeds available rank bound " +
                             std::to_string(max_dim));
    }
    Index wd = options.work_dim > 0 ? static_cast<Index>(options.work_dim) : std::max(2 * k, k + 20);
    wd = std::clamp(wd, k, max_dim);

    std::mt19937_64 rng(options.seed);
    MatrixXd V(n, wd + 1);
    MatrixXd W(m, wd);
    MatrixXd B = MatrixXd::Zero(wd, wd);
    V.col(0) = random_unit(n, rng);

    TruncatedSvd out;
    Index start = 0;
    double beta = 0.0;
    VectorXd f(n);

    for (std::size_t restart = 0;; ++restart) {
        for (Index j = start; j < wd; ++j) {
            VectorXd w = A.apply(V.col(j));
            ++out.matvecs;
            orthogonalize_locked(w, locked);
            if (j > 0 && j == start) {
                w.noalias() -= W.leftCols(j) * B.col(j).head(j);
            } else if (j > 0) {
                w -= B(j - 1, j) * W.col(j - 1);
            }
            orthogonalize(w, W, j);
            double alpha = w.norm();
            if (alpha <= 1e-14 * std::max(1.0, B.diagonal().head(j).cwiseAbs().maxCoeff())) {
                w = random_orthogonal(m, W, j, locked, rng);
                alpha = 0.0;
                W.col(j) = w;
            } else {
                W.col(j) = w / alpha;
            }
            B(j, j) = alpha;

            f = A.apply_transpose(W.col(j));
            ++out.matvecs;
            f -= alpha * V.col(j);
            orthogonalize(f, V, j + 1);
            beta = f.norm();
            const double scale = std::max(1.0, B.diagonal().head(j + 1).cwiseAbs().maxCoeff());
            if (beta <= 1e-14 * scale) {
                beta = 0.0;
                V.col(j + 1) = random_orthogonal(n, V, j + 1, nullptr, rng);
            } else {
                V.col(j + 1) = f / beta;
            }
            if (j + 1 < wd) B(j, j + 1) = beta;
        }

        Eigen::JacobiSVD<MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const VectorXd& s = svd.singularValues();
        const MatrixXd& Ub = svd.matrixU();
        const MatrixXd& Vb = svd.matrixV();
        const VectorXd res = beta * Ub.row(wd - 1).transpose();
        const double sigma1 = s[0];

        Index converged = 0;
        while (converged < k && std::abs(res[converged]) <= options.tol * sigma1) ++converged;
        if (converged == k || sigma1 == 0.0) {
            out.sigma = s.head(k);
            out.U = W * Ub.leftCols(k);
            out.V = V.leftCols(wd) * Vb.leftCols(k);
            out.residuals = res.head(k).cwiseAbs();
            out.restarts = restart;
            return out;
        }
        if (restart >= options.max_restarts) {
            throw ConvergenceError(static_cast<std::size_t>(converged), static_cast<std::size_t>(k),
                                   "Lanczos bidiagonalization did not converge after " +
                                       std::to_string(options.max_restarts) + " restarts");
        }

        // Thick restart: keep the leading `keep` Ritz pairs; B becomes an
        // upper arrowhead [diag(s) res; 0 alpha] once the next step runs.
        const Index keep = std::min(wd - 1, std::max(k, k + (wd - k) / 2));
        const MatrixXd Vkeep = V.leftCols(wd) * Vb.leftCols(keep);
        const MatrixXd Wkeep = W * Ub.leftCols(keep);
        const VectorXd next = V.col(wd);
        V.leftCols(keep) = Vkeep;
        V.col(keep) = next;
        W.leftCols(keep) = Wkeep;
        B.setZero();
        for (Index i = 0; i < keep; ++i) {
            B(i, i) = s[i];
            B(i, keep) = res[i];
        }
        start = keep;
    }
}

}  // namespace ssa
