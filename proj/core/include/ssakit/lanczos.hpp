#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ssa {

class HankelOperator;

/// Matrix-free linear operator A (rows x cols) given by its two products.
struct LinearOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;            ///< A x
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_transpose;  ///< A^T y
};

LinearOperator as_operator(const HankelOperator& op);
LinearOperator as_operator(const Eigen::MatrixXd& A);

struct LanczosOptions {
    std::size_t neig = 10;
    double tol = 1e-8;              ///< |A^T u_i - sigma_i v_i| <= tol * sigma_1
    std::size_t max_restarts = 300;
    std::size_t work_dim = 0;       ///< Krylov basis size; 0 picks max(2 neig, neig + 20)
    std::uint64_t seed = 1;
};

struct TruncatedSvd {
    Eigen::VectorXd sigma;  ///< descending
    Eigen::MatrixXd U;      ///< rows x neig
    Eigen::MatrixXd V;      ///< cols x neig
    Eigen::VectorXd residuals;
    std::size_t restarts = 0;
    std::size_t matvecs = 0;
};

/// Leading singular triplets by thick-restarted Golub-Kahan-Lanczos
/// bidiagonalization with full reorthogonalization.
///
/// When `locked` (rows x p, orthonormal columns) is given, the iteration
/// runs on (I - locked locked^T) A, so the returned triplets are the ones
/// following an already converged leading block.
TruncatedSvd lanczos_svd(const LinearOperator& A, const LanczosOptions& options,
                         const Eigen::MatrixXd* locked = nullptr);

}  // namespace ssa
