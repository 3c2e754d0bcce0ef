#include "ssakit/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <list>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "fft.hpp"
#include "ssakit/errors.hpp"
#include "ssakit/lanczos.hpp"

namespace ssa {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// LRU store of elementary reconstructed series keyed by eigentriple index.
class ElementaryCache {
public:
    using Value = std::shared_ptr<const std::vector<double>>;

    explicit ElementaryCache(std::size_t budget) : budget_(budget) {}

    Value find(std::size_t i) {
        std::lock_guard lock(mutex_);
        auto it = map_.find(i);
        if (it == map_.end()) return nullptr;
        order_.splice(order_.begin(), order_, it->second.second);
        return it->second.first;
    }

    void insert(std::size_t i, Value v) {
        std::lock_guard lock(mutex_);
        if (budget_ == 0) return;
        if (auto it = map_.find(i); it != map_.end()) {
            order_.splice(order_.begin(), order_, it->second.second);
            return;
        }
        order_.push_front(i);
        map_.emplace(i, std::make_pair(std::move(v), order_.begin()));
        while (map_.size() > budget_) {
            map_.erase(order_.back());
            order_.pop_back();
        }
    }

    void clear() {
        std::lock_guard lock(mutex_);
        map_.clear();
        order_.clear();
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return map_.size();
    }

    std::vector<std::size_t> keys() const {
        std::lock_guard lock(mutex_);
        std::vector<std::size_t> out(order_.begin(), order_.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::atomic<std::size_t> computations{0};

private:
    mutable std::mutex mutex_;
    std::size_t budget_;
    std::list<std::size_t> order_;
    std::unordered_map<std::size_t, std::pair<Value, std::list<std::size_t>::iterator>> map_;
};

std::string_view to_string(SsaKind kind) {
    return kind == SsaKind::basic ? "basic" : "toeplitz";
}

std::string_view to_string(SvdMethod method) {
    switch (method) {
        case SvdMethod::automatic: return "auto";
        case SvdMethod::eigen: return "eigen";
        case SvdMethod::svd: return "svd";
        case SvdMethod::lanczos: return "lanczos";
    }
    return "?";
}

SsaKind parse_kind(std::string_view text) {
    if (text == "basic" || text == "1d-ssa") return SsaKind::basic;
    if (text == "toeplitz" || text == "toeplitz-ssa") return SsaKind::toeplitz;
    throw ParameterError("unknown SSA kind '" + std::string(text) + "'");
}

SvdMethod parse_method(std::string_view text) {
    if (text == "auto") return SvdMethod::automatic;
    if (text == "eigen") return SvdMethod::eigen;
    if (text == "svd") return SvdMethod::svd;
    if (text == "lanczos" || text == "nutrlan" || text == "propack") return SvdMethod::lanczos;
    throw ParameterError("unknown SVD method '" + std::string(text) + "'");
}

SvdMethod resolve_method(SvdMethod requested, SsaKind kind, const WindowSpec& spec,
                         std::optional<std::size_t> neig, const SessionConfig& config) {
    if (kind == SsaKind::toeplitz) {
        if (requested == SvdMethod::svd || requested == SvdMethod::lanczos) {
            throw ParameterError("Toeplitz SSA supports only the eigen method");
        }
        return SvdMethod::eigen;
    }
    if (requested != SvdMethod::automatic) return requested;
    const auto dim = spec.min_dim();
    if (dim <= config.auto_eigen_max_dim) return SvdMethod::eigen;
    if (neig && static_cast<double>(*neig) > config.auto_eigen_neig_fraction * static_cast<double>(dim)) {
        return SvdMethod::eigen;
    }
    return SvdMethod::lanczos;
}

// ---------------------------------------------------------------------------

std::vector<double> lag_autocovariance(std::span<const double> x, std::size_t L) {
    const std::size_t N = x.size();
    WindowSpec::make(N, L);
    std::vector<double> c(L, 0.0);
    if (L <= 64) {
        for (std::size_t h = 0; h < L; ++h) {
            double s = 0.0;
            for (std::size_t m = 0; m + h < N; ++m) s += x[m] * x[m + h];
            c[h] = s / static_cast<double>(N - h);
        }
        return c;
    }
    // Autocorrelation through |FFT|^2 with padding >= 2N - 1 (no wrap-around).
    const auto fft = detail::RealFft::get(detail::good_fft_size(2 * N - 1));
    std::vector<double> buf(fft->size(), 0.0);
    std::copy(x.begin(), x.end(), buf.begin());
    std::vector<std::complex<double>> spec(fft->spectrum_size());
    fft->forward(buf, spec);
    for (auto& z : spec) z = std::norm(z);
    fft->inverse(spec, buf);
    const double scale = 1.0 / static_cast<double>(fft->size());
    for (std::size_t h = 0; h < L; ++h) c[h] = buf[h] * scale / static_cast<double>(N - h);
    return c;
}

MatrixXd lagcov(std::span<const double> series, std::size_t L) {
    const auto c = lag_autocovariance(series, L);
    MatrixXd C(static_cast<Index>(L), static_cast<Index>(L));
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            C(static_cast<Index>(i), static_cast<Index>(j)) = c[i > j ? i - j : j - i];
        }
    }
    return C;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t default_window(std::size_t N) { return N / 2; }

}  // namespace

Session::Session(TimeSeries series, std::optional<std::size_t> L, SsaKind kind,
                 SvdMethod requested, SessionConfig config)
    : series_(std::move(series)),
      op_(series_.values(), L.value_or(default_window(series_.size()))),
      kind_(kind),
      requested_(requested),
      method_(requested),
      config_(config),
      cache_(std::make_unique<ElementaryCache>(config.cache_budget)) {}

Session::Session(TimeSeries series, SessionOptions options)
    : Session(std::move(series), options.L, options.kind, options.method, options.config) {
    method_ = resolve_method(requested_, kind_, spec(), options.neig, config_);
    if (options.neig && *options.neig > max_size()) {
        if (method_ == SvdMethod::lanczos) {
            throw ParameterError("neig=" + std::to_string(*options.neig) + " exceeds min(L, K)=" +
                                 std::to_string(max_size()));
        }
    }
    if (options.decompose_now) decompose(options.neig);
}

Session Session::restore(TimeSeries series, std::size_t L, SsaKind kind, SvdMethod requested,
                         SvdMethod resolved, SessionConfig config, Eigentriples triples) {
    Session s(std::move(series), L, kind, requested, config);
    s.method_ = resolved;
    const auto n = triples.size();
    if (static_cast<std::size_t>(triples.U.cols()) != n ||
        static_cast<std::size_t>(triples.U.rows()) != L ||
        (triples.V && (static_cast<std::size_t>(triples.V->cols()) != n ||
                       static_cast<std::size_t>(triples.V->rows()) != s.spec().K())) ||
        triples.zero_factor.size() != n || n > s.max_size()) {
        throw ValidationError("stored eigentriples are inconsistent with the window");
    }
    s.triples_ = std::move(triples);
    return s;
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

std::size_t Session::max_size() const noexcept {
    return kind_ == SsaKind::toeplitz ? spec().L : spec().min_dim();
}

double Session::sigma(std::size_t i) const { return std::sqrt(lambda(i)); }

VectorXd Session::eigenvector(std::size_t i) const {
    if (i >= size()) throw ParameterError("eigentriple " + std::to_string(i + 1) + " not computed");
    return triples_.U.col(static_cast<Index>(i));
}

VectorXd Session::factor(std::size_t i) const {
    if (i >= size()) throw ParameterError("eigentriple " + std::to_string(i + 1) + " not computed");
    return op_.apply_transpose(triples_.U.col(static_cast<Index>(i)));
}

VectorXd Session::factor_vector(std::size_t i) const {
    if (i >= size()) throw ParameterError("eigentriple " + std::to_string(i + 1) + " not computed");
    if (triples_.V) return triples_.V->col(static_cast<Index>(i));
    VectorXd q = factor(i);
    const double nq = q.norm();
    return nq > 0.0 ? VectorXd(q / nq) : VectorXd::Zero(q.size());
}

void Session::decompose(std::optional<std::size_t> neig) {
    cache_->clear();
    triples_ = Eigentriples{};
    if (kind_ == SsaKind::toeplitz) {
        decompose_toeplitz();
        return;
    }
    switch (method_) {
        case SvdMethod::eigen: decompose_eigen(); break;
        case SvdMethod::svd: decompose_svd(); break;
        case SvdMethod::lanczos: {
            const std::size_t want =
                neig.value_or(std::min(max_size(), config_.lanczos_default_neig));
            decompose_lanczos(want);
            break;
        }
        case SvdMethod::automatic: throw StateError("SVD method was not resolved");
    }
}

void Session::decompose_eigen() {
    const MatrixXd X = op_.dense();
    // With L > K the K x K Gram matrix carries the same spectrum.
    const bool wide = X.rows() <= X.cols();
    const MatrixXd S = wide ? MatrixXd(X * X.transpose()) : MatrixXd(X.transpose() * X);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    const auto count = static_cast<Index>(max_size());
    const Index n = S.rows();
    const VectorXd& ev = es.eigenvalues();  // ascending
    const double top = ev[n - 1];

    MatrixXd vecs(n, count);
    triples_.lambda.resize(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        double lam = ev[n - 1 - i];
        if (top > 0.0 && lam < -1e-9 * top) {
            throw NumericalError("Gram matrix has a significantly negative eigenvalue");
        }
        triples_.lambda[static_cast<std::size_t>(i)] = std::max(lam, 0.0);
        vecs.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    if (wide) {
        triples_.U = std::move(vecs);
    } else {
        // Left vectors from X V; QR keeps them orthonormal where sigma is tiny.
        Eigen::HouseholderQR<MatrixXd> qr(X * vecs);
        triples_.U = qr.householderQ() * MatrixXd::Identity(X.rows(), count);
        for (Index i = 0; i < count; ++i) {
            if (triples_.U.col(i).dot(X * vecs.col(i)) < 0.0) triples_.U.col(i) *= -1.0;
        }
    }
    triples_.zero_factor.assign(static_cast<std::size_t>(count), 0);
    normalize_signs(0);
}

void Session::decompose_svd() {
    const MatrixXd X = op_.dense();
    Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD failed");
    const auto count = static_cast<Index>(max_size());
    triples_.U = svd.matrixU().leftCols(count);
    triples_.V = svd.matrixV().leftCols(count);
    triples_.lambda.resize(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        const double s = svd.singularValues()[i];
        triples_.lambda[static_cast<std::size_t>(i)] = s * s;
    }
    triples_.zero_factor.assign(static_cast<std::size_t>(count), 0);
    normalize_signs(0);
}

void Session::decompose_toeplitz() {
    const MatrixXd C = lagcov(series_.values(), spec().L);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    const Index L = C.rows();
    const Index K = static_cast<Index>(spec().K());
    triples_.U.resize(L, L);
    triples_.V = MatrixXd(K, L);
    triples_.lambda.resize(static_cast<std::size_t>(L));
    triples_.order_values.resize(static_cast<std::size_t>(L));
    triples_.zero_factor.assign(static_cast<std::size_t>(L), 0);
    for (Index i = 0; i < L; ++i) {
        triples_.U.col(i) = es.eigenvectors().col(L - 1 - i);
        triples_.order_values[static_cast<std::size_t>(i)] = es.eigenvalues()[L - 1 - i];
    }
    normalize_signs(0);

    const double scale = std::sqrt(op_.frobenius_norm_squared());
    for (Index i = 0; i < L; ++i) {
        const VectorXd q = op_.apply_transpose(triples_.U.col(i));
        const double nq = q.norm();
        if (nq <= 1e-13 * scale) {
            triples_.lambda[static_cast<std::size_t>(i)] = 0.0;
            triples_.V->col(i).setZero();
            triples_.zero_factor[static_cast<std::size_t>(i)] = 1;
        } else {
            triples_.lambda[static_cast<std::size_t>(i)] = nq * nq;
            triples_.V->col(i) = q / nq;
        }
    }
}

void Session::decompose_lanczos(std::size_t neig) {
    if (neig < 1 || neig > max_size()) {
        throw ParameterError("neig=" + std::to_string(neig) + " must be in [1, " +
                             std::to_string(max_size()) + "]");
    }
    LanczosOptions opt;
    opt.neig = neig;
    opt.tol = config_.lanczos_tol;
    opt.max_restarts = config_.lanczos_max_restarts;
    opt.seed = config_.lanczos_seed;
    const auto res = lanczos_svd(as_operator(op_), opt);
    triples_.U = res.U;
    triples_.V = res.V;
    triples_.lambda.resize(neig);
    for (std::size_t i = 0; i < neig; ++i) {
        const double s = res.sigma[static_cast<Index>(i)];
        triples_.lambda[i] = s * s;
    }
    triples_.zero_factor.assign(neig, 0);
    normalize_signs(0);
}

void Session::extend(std::size_t neig) {
    if (neig > max_size()) {
        throw ParameterError("cannot extend to " + std::to_string(neig) + " eigentriples; at most " +
                             std::to_string(max_size()) + " exist");
    }
    if (neig <= size()) return;
    if (size() == 0) {
        decompose(neig);
        if (size() < neig) throw StateError("decomposition produced fewer eigentriples than requested");
        return;
    }
    if (method_ != SvdMethod::lanczos) return;  // full backends are already complete

    // Deflated restart: the new triples are the leading ones of
    // (I - U U^T) X, which leaves the converged block untouched.
    const std::size_t have = size();
    LanczosOptions opt;
    opt.neig = neig - have;
    opt.tol = config_.lanczos_tol;
    opt.max_restarts = config_.lanczos_max_restarts;
    opt.seed = config_.lanczos_seed + have;
    const MatrixXd locked = triples_.U;
    const auto res = lanczos_svd(as_operator(op_), opt, &locked);

    const auto L = static_cast<Index>(spec().L);
    const auto K = static_cast<Index>(spec().K());
    MatrixXd U(L, static_cast<Index>(neig));
    MatrixXd V(K, static_cast<Index>(neig));
    U.leftCols(static_cast<Index>(have)) = triples_.U;
    U.rightCols(static_cast<Index>(opt.neig)) = res.U;
    V.leftCols(static_cast<Index>(have)) = *triples_.V;
    V.rightCols(static_cast<Index>(opt.neig)) = res.V;
    triples_.U = std::move(U);
    triples_.V = std::move(V);
    for (std::size_t i = 0; i < opt.neig; ++i) {
        const double s = res.sigma[static_cast<Index>(i)];
        triples_.lambda.push_back(s * s);
        triples_.zero_factor.push_back(0);
    }
    normalize_signs(have);
}

// First coordinate with |p| > 1e-12 is made positive; factor vectors follow.
void Session::normalize_signs(std::size_t from) {
    for (std::size_t i = from; i < size(); ++i) {
        const auto col = static_cast<Index>(i);
        auto p = triples_.U.col(col);
        for (Index r = 0; r < p.size(); ++r) {
            if (std::abs(p[r]) > 1e-12) {
                if (p[r] < 0.0) {
                    p = -p;
                    if (triples_.V) triples_.V->col(col) = -triples_.V->col(col);
                }
                break;
            }
        }
    }
}

std::shared_ptr<const std::vector<double>> Session::elementary(std::size_t i) const {
    if (i >= size()) {
        throw ParameterError("eigentriple " + std::to_string(i + 1) + " is not computed (have " +
                             std::to_string(size()) + ")");
    }
    if (auto hit = cache_->find(i)) return hit;
    const auto col = static_cast<Index>(i);
    std::vector<double> values;
    if (triples_.V && kind_ == SsaKind::basic) {
        const VectorXd u = triples_.U.col(col) * std::sqrt(triples_.lambda[i]);
        values = op_.hankelize_rank1(u, triples_.V->col(col));
    } else {
        values = op_.hankelize_rank1(triples_.U.col(col), factor(i));
    }
    cache_->computations.fetch_add(1, std::memory_order_relaxed);
    auto ptr = std::make_shared<const std::vector<double>>(std::move(values));
    cache_->insert(i, ptr);
    return ptr;
}

std::size_t Session::elementary_computations() const noexcept { return cache_->computations.load(); }
std::size_t Session::cached_elementary() const noexcept { return cache_->size(); }
std::vector<std::size_t> Session::cached_indices() const { return cache_->keys(); }
void Session::clear_cache() const { cache_->clear(); }

void Session::seed_cache(std::size_t i, std::vector<double> values) const {
    if (i >= size() || values.size() != spec().N) {
        throw ValidationError("cached elementary series does not match the session");
    }
    cache_->insert(i, std::make_shared<const std::vector<double>>(std::move(values)));
}

std::size_t Session::memory_estimate() const noexcept {
    std::size_t bytes = sizeof(double) * (spec().N * 3 + op_.circulant_size() + 2);
    bytes += sizeof(double) * static_cast<std::size_t>(triples_.U.size());
    if (triples_.V) bytes += sizeof(double) * static_cast<std::size_t>(triples_.V->size());
    bytes += sizeof(double) * triples_.lambda.size();
    bytes += sizeof(double) * spec().N * cache_->size();
    return bytes;
}

std::string Session::summary() const {
    std::ostringstream out;
    const double mib = 1024.0 * 1024.0;
    const std::size_t cached = cached_elementary();
    out << "Series length: " << spec().N << ",    Window length: " << spec().L
        << ",    SVD method: " << to_string(method_) << ",    Kind: " << to_string(kind_) << '\n';
    out << "Computed:\n";
    out << "Eigenvalues: " << size() << ",       Eigenvectors: " << size()
        << ",     Factor vectors: " << (triples_.V ? size() : 0) << '\n';
    out << "Pre-cached: " << cached << " elementary series ("
        << static_cast<double>(cached * spec().N * sizeof(double)) / mib << " MiB)\n";
    out << "Overall memory consumption (estimate): " << static_cast<double>(memory_estimate()) / mib
        << " MiB\n";
    return out.str();
}

}  // namespace ssa
