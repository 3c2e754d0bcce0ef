#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssakit/hankel.hpp"
#include "ssakit/series_io.hpp"

namespace ssa {

enum class SsaKind { basic, toeplitz };
enum class SvdMethod { automatic, eigen, svd, lanczos };

std::string_view to_string(SsaKind kind);
std::string_view to_string(SvdMethod method);
SsaKind parse_kind(std::string_view text);
SvdMethod parse_method(std::string_view text);

/// Tunables shared by the decomposition and reconstruction stages.
struct SessionConfig {
    std::size_t cache_budget = 256;          ///< elementary series kept in the LRU cache
    double lanczos_tol = 1e-8;               ///< residual bound relative to sigma_1
    std::size_t lanczos_max_restarts = 300;
    std::size_t lanczos_default_neig = 50;
    std::uint64_t lanczos_seed = 20130101;
    std::size_t auto_eigen_max_dim = 100;    ///< min(L, K) at or below this selects eigen
    double auto_eigen_neig_fraction = 0.5;   ///< neig above this share of min(L, K) selects eigen
};

struct SessionOptions {
    std::optional<std::size_t> L;  ///< default floor(N / 2)
    SsaKind kind = SsaKind::basic;
    SvdMethod method = SvdMethod::automatic;
    std::optional<std::size_t> neig;
    bool decompose_now = true;
    SessionConfig config;
};

/// Ordered eigentriples of a decomposition.
///
/// Column i of `U` is P_i. `V`, when present, holds the unit factor vectors
/// Q_i / |Q_i|. `lambda[i]` is |Q_i|^2 = |X^T P_i|^2. For the Toeplitz kind
/// `order_values` holds the lag-covariance eigenvalues that define the order.
struct Eigentriples {
    std::vector<double> lambda;
    Eigen::MatrixXd U;
    std::optional<Eigen::MatrixXd> V;
    std::vector<double> order_values;
    std::vector<std::uint8_t> zero_factor;  ///< 1 where X^T P_i vanished

    std::size_t size() const noexcept { return lambda.size(); }
};

/// Resolved choice of backend for a given problem.
SvdMethod resolve_method(SvdMethod requested, SsaKind kind, const WindowSpec& spec,
                         std::optional<std::size_t> neig, const SessionConfig& config);

class ElementaryCache;

/// An embedded series plus its (possibly partial) decomposition.
///
/// Read accessors are safe to call concurrently; decompose/extend need
/// exclusive access. The session owns an elementary-series cache that is
/// internally synchronized.
class Session {
public:
    explicit Session(TimeSeries series, SessionOptions options = {});

    /// Rebuilds a session from stored eigentriples without recomputation.
    static Session restore(TimeSeries series, std::size_t L, SsaKind kind, SvdMethod requested,
                           SvdMethod resolved, SessionConfig config, Eigentriples triples);

    Session(Session&&) noexcept;
    Session& operator=(Session&&) noexcept;
    ~Session();

    const TimeSeries& series() const noexcept { return series_; }
    const WindowSpec& spec() const noexcept { return op_.spec(); }
    const HankelOperator& op() const noexcept { return op_; }
    SsaKind kind() const noexcept { return kind_; }
    SvdMethod requested_method() const noexcept { return requested_; }
    SvdMethod method() const noexcept { return method_; }
    const SessionConfig& config() const noexcept { return config_; }

    /// Number of eigentriples computed so far.
    std::size_t size() const noexcept { return triples_.size(); }
    /// Upper bound on the number of eigentriples: min(L, K) or L for Toeplitz.
    std::size_t max_size() const noexcept;
    bool decomposed() const noexcept { return triples_.size() > 0; }

    const Eigentriples& triples() const noexcept { return triples_; }
    double lambda(std::size_t i) const { return triples_.lambda.at(i); }
    double sigma(std::size_t i) const;
    Eigen::VectorXd eigenvector(std::size_t i) const;
    bool has_factor_vectors() const noexcept { return triples_.V.has_value(); }
    /// Q_i / |Q_i|; computed through X^T P_i when not stored.
    Eigen::VectorXd factor_vector(std::size_t i) const;
    /// Q_i = X^T P_i (unnormalized).
    Eigen::VectorXd factor(std::size_t i) const;

    /// Runs the decomposition; `neig` is honored by the Lanczos backend only.
    void decompose(std::optional<std::size_t> neig = std::nullopt);
    /// Makes at least `neig` eigentriples available. Already computed triples
    /// are kept bit for bit; a no-op for full backends or smaller requests.
    void extend(std::size_t neig);

    /// Elementary reconstructed series i (0-based); cached.
    std::shared_ptr<const std::vector<double>> elementary(std::size_t i) const;
    std::size_t elementary_computations() const noexcept;
    std::size_t cached_elementary() const noexcept;
    std::vector<std::size_t> cached_indices() const;
    void clear_cache() const;
    /// Inserts a precomputed elementary series (used by snapshot loading).
    void seed_cache(std::size_t i, std::vector<double> values) const;

    /// Rough memory estimate in bytes of the stored decomposition and cache.
    std::size_t memory_estimate() const noexcept;

    /// Multi-line description mirroring an R-style summary block.
    std::string summary() const;

private:
    Session(TimeSeries series, std::optional<std::size_t> L, SsaKind kind, SvdMethod requested,
            SessionConfig config);

    void decompose_eigen();
    void decompose_svd();
    void decompose_toeplitz();
    void decompose_lanczos(std::size_t neig);
    void normalize_signs(std::size_t from);

    TimeSeries series_;
    HankelOperator op_;
    SsaKind kind_;
    SvdMethod requested_;
    SvdMethod method_;
    SessionConfig config_;
    Eigentriples triples_;
    std::unique_ptr<ElementaryCache> cache_;
};

/// c(h) = (1 / (N - h)) sum_m x(m) x(m + h) arranged as the L x L Toeplitz
/// lag-covariance matrix.
Eigen::MatrixXd lagcov(std::span<const double> series, std::size_t L);
/// Lag covariances c(0..L-1) only.
std::vector<double> lag_autocovariance(std::span<const double> series, std::size_t L);

}  // namespace ssa
