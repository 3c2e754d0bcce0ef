#include "ssakit/forecasting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "ssakit/errors.hpp"

namespace ssa {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kVerticalityMargin = 1e-9;

// R = (a_{L-1}, ..., a_1) together with nu^2.
struct LastRowSplit {
    VectorXd R;
    double nu2;
};

LastRowSplit split_basis(const MatrixXd& basis) {
    const Index L = basis.rows();
    if (L < 2) throw ParameterError("forecasting needs L >= 2");
    if (basis.cols() < 1) throw ParameterError("forecasting needs a nonempty group");
    const VectorXd pi = basis.row(L - 1).transpose();
    const double nu2 = pi.squaredNorm();
    if (!(nu2 < 1.0 - kVerticalityMargin)) {
        throw VerticalityError(nu2, "verticality coefficient nu^2 = " + std::to_string(nu2) +
                                        " is too close to 1; the subspace contains e_L");
    }
    VectorXd R = basis.topRows(L - 1) * pi / (1.0 - nu2);
    return {std::move(R), nu2};
}

MatrixXd group_basis(Session& session, const std::vector<std::size_t>& group) {
    ensure_computed(session, Grouping::single(group));
    MatrixXd P(static_cast<Index>(session.spec().L), static_cast<Index>(group.size()));
    for (std::size_t j = 0; j < group.size(); ++j) P.col(static_cast<Index>(j)) = session.eigenvector(group[j] - 1);
    return P;
}

std::vector<double> group_signal(Session& session, const std::vector<std::size_t>& group) {
    const std::size_t N = session.spec().N;
    std::vector<double> out(N, 0.0);
    for (auto i : group) {
        const auto el = session.elementary(i - 1);
        for (std::size_t s = 0; s < N; ++s) out[s] += (*el)[s];
    }
    return out;
}

// Mean written as x0 + mean(x - x0) so identical samples average exactly.
double stable_mean(std::span<const double> xs) {
    const double x0 = xs.front();
    double acc = 0.0;
    for (double x : xs) acc += x - x0;
    return x0 + acc / static_cast<double>(xs.size());
}

}  // namespace

double Lrr::next(std::span<const double> history) const {
    const std::size_t p = coef.size();
    if (history.size() < p) throw ParameterError("LRR history shorter than its order");
    double y = 0.0;
    const std::size_t n = history.size();
    for (std::size_t j = 1; j <= p; ++j) y += coef[j - 1] * history[n - j];
    return y;
}

Lrr lrr_from_basis(const MatrixXd& basis) {
    const auto [R, nu2] = split_basis(basis);
    Lrr out;
    out.L = static_cast<std::size_t>(basis.rows());
    out.nu2 = nu2;
    const Index p = R.size();
    out.coef.resize(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) out.coef[static_cast<std::size_t>(j)] = R[p - 1 - j];
    return out;
}

Lrr lrr(Session& session, const std::vector<std::size_t>& group) {
    Lrr out = lrr_from_basis(group_basis(session, group));
    out.group = group;
    return out;
}

std::string_view to_string(ForecastMethod m) {
    return m == ForecastMethod::vector ? "vector" : "recurrent";
}

std::vector<double> ForecastResult::values() const {
    if (only_new) return ahead;
    std::vector<double> out = base;
    out.insert(out.end(), ahead.begin(), ahead.end());
    return out;
}

std::optional<TimeIndex> ForecastResult::values_index() const {
    return only_new ? shift_index(index, base.size()) : index;
}

std::vector<double> apply_lrr(const Lrr& lrr, std::span<const double> base, std::size_t M) {
    if (base.size() < lrr.order()) throw ParameterError("series shorter than LRR order");
    std::vector<double> y(base.begin(), base.end());
    y.reserve(base.size() + M);
    for (std::size_t m = 0; m < M; ++m) y.push_back(lrr.next(y));
    return {y.end() - static_cast<std::ptrdiff_t>(M), y.end()};
}

MatrixXd vector_projector(const MatrixXd& basis) {
    const auto [R, nu2] = split_basis(basis);
    const auto Vt = basis.topRows(basis.rows() - 1);
    return Vt * Vt.transpose() + (1.0 - nu2) * R * R.transpose();
}

std::vector<double> vector_forecast(const HankelOperator& op, const MatrixXd& basis, std::size_t M,
                                    VectorForecastOptions options, std::vector<double>* base_out) {
    const auto L = static_cast<Index>(op.rows());
    const auto K = static_cast<Index>(op.cols());
    const std::size_t N = op.spec().N;
    if (basis.rows() != L) throw ParameterError("basis rows must equal L");
    const auto [R, nu2] = split_basis(basis);
    const Index r = basis.cols();
    const Index total = K + static_cast<Index>(M) + L - 1;

    // Coordinates of the projected lagged vectors: C = V^T X.
    MatrixXd C(r, K);
    for (Index j = 0; j < r; ++j) C.row(j) = op.apply_transpose(basis.col(j)).transpose();

    std::vector<double> y;
    if (options.subspace) {
        // P_Vec maps span(V) into itself, so Z_i = V c_i with c_i = A c_{i-1}.
        const auto Vt = basis.topRows(L - 1);
        const auto Vd = basis.bottomRows(L - 1);
        MatrixXd image(L, r);
        image.topRows(L - 1) = Vt * (Vt.transpose() * Vd) + (1.0 - nu2) * R * (R.transpose() * Vd);
        image.row(L - 1) = R.transpose() * Vd;
        const MatrixXd A = basis.transpose() * image;
        MatrixXd Cx(r, total);
        Cx.leftCols(K) = C;
        for (Index i = K; i < total; ++i) Cx.col(i) = A * Cx.col(i - 1);
        y.assign(static_cast<std::size_t>(L + total - 1), 0.0);
        for (Index j = 0; j < r; ++j) {
            const auto part = hankelize_rank1(basis.col(j), Cx.row(j).transpose());
            for (std::size_t s = 0; s < y.size(); ++s) y[s] += part[s];
        }
    } else {
        // Pi = Vt Vt^T + (1 - nu^2) R R^T is applied in factored form.
        const MatrixXd Vt = basis.topRows(L - 1);
        MatrixXd Z(L, total);
        Z.leftCols(K) = basis * C;
        for (Index i = K; i < total; ++i) {
            const VectorXd tail = Z.col(i - 1).tail(L - 1);
            const double rt = R.dot(tail);
            Z.col(i).head(L - 1) = Vt * (Vt.transpose() * tail) + ((1.0 - nu2) * rt) * R;
            Z(L - 1, i) = rt;
        }
        y = hankelize_matrix(Z);
    }
    if (base_out) base_out->assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(N));
    return {y.begin() + static_cast<std::ptrdiff_t>(N), y.begin() + static_cast<std::ptrdiff_t>(N + M)};
}

std::vector<ForecastResult> rforecast(Session& session, const Grouping& grouping, std::size_t M,
                                      bool only_new) {
    ensure_computed(session, grouping);
    std::vector<ForecastResult> out;
    for (std::size_t j = 0; j < grouping.size(); ++j) {
        const auto& group = grouping.groups[j];
        const Lrr rule = lrr(session, group);
        ForecastResult f;
        f.label = grouping.label(j);
        f.method = ForecastMethod::recurrent;
        f.base = group_signal(session, group);
        f.ahead = apply_lrr(rule, f.base, M);
        f.index = session.series().index();
        f.only_new = only_new;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<ForecastResult> vforecast(Session& session, const Grouping& grouping, std::size_t M,
                                      bool only_new, VectorForecastOptions options) {
    ensure_computed(session, grouping);
    std::vector<ForecastResult> out;
    for (std::size_t j = 0; j < grouping.size(); ++j) {
        const auto& group = grouping.groups[j];
        ForecastResult f;
        f.label = grouping.label(j);
        f.method = ForecastMethod::vector;
        f.ahead = vector_forecast(session.op(), group_basis(session, group), M, options);
        f.base = group_signal(session, group);
        f.index = session.series().index();
        f.only_new = only_new;
        out.push_back(std::move(f));
    }
    return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ParameterError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile level outside [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BootstrapForecast bforecast(Session& session, const std::vector<std::size_t>& group, std::size_t M,
                            const BootstrapOptions& options) {
    if (!(options.level > 0.0 && options.level < 1.0)) throw ParameterError("level must lie in (0, 1)");
    if (options.replicates < 2) throw ParameterError("bootstrap needs at least 2 replicates");
    if (M == 0) throw ParameterError("forecast length must be positive");
    ensure_computed(session, Grouping::single(group));

    const auto& x = session.series();
    const std::size_t N = x.size();
    const std::size_t r = group.size();
    const std::vector<double> signal = group_signal(session, group);
    std::vector<double> residual(N);
    double res2 = 0.0, sig2 = 0.0;
    for (std::size_t s = 0; s < N; ++s) {
        residual[s] = x[s] - signal[s];
        res2 += residual[s] * residual[s];
        sig2 += signal[s] * signal[s];
    }
    // Roundoff-level residuals are exact zeros; otherwise every replicate of a
    // noise-free signal would differ in the last bits.
    if (res2 <= 1e-22 * sig2) std::fill(residual.begin(), residual.end(), 0.0);

    std::vector<std::size_t> leading(r);
    for (std::size_t i = 0; i < r; ++i) leading[i] = i + 1;
    Grouping replicate_group = Grouping::single(leading);

    SessionOptions sopts;
    sopts.L = session.spec().L;
    sopts.kind = session.kind();
    sopts.method = session.requested_method();
    sopts.neig = r;
    sopts.config = session.config();

    const std::size_t Q = options.replicates;
    std::vector<std::vector<double>> results(Q);
    std::vector<std::uint8_t> ok(Q, 0);

    auto run = [&](std::size_t q) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(q & 0xffffffffu),
                          static_cast<std::uint32_t>(q >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> pick(0, N - 1);
        std::vector<double> xq(N);
        for (std::size_t s = 0; s < N; ++s) xq[s] = signal[s] + residual[pick(rng)];
        try {
            Session rep(TimeSeries(std::move(xq)), sopts);
            auto f = options.method == ForecastMethod::vector ? vforecast(rep, replicate_group, M)
                                                              : rforecast(rep, replicate_group, M);
            for (double v : f[0].ahead) {
                if (!std::isfinite(v)) return;
            }
            results[q] = std::move(f[0].ahead);
            ok[q] = 1;
        } catch (const Error&) {
            // counted as dropped below
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, Q));
    if (workers == 1) {
        for (std::size_t q = 0; q < Q; ++q) run(q);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t q = next++; q < Q; q = next++) run(q);
            });
        }
        for (auto& t : pool) t.join();
    }

    BootstrapForecast out;
    out.level = options.level;
    out.replicates = Q;
    out.seed = options.seed;
    out.method = options.method;
    out.base = signal;
    out.index = x.index();
    out.dropped = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    if (out.dropped * 10 > Q) {
        throw BootstrapError(std::to_string(out.dropped) + " of " + std::to_string(Q) +
                             " bootstrap replicates failed");
    }

    const double alpha = (1.0 - options.level) / 2.0;
    std::vector<double> column;
    column.reserve(Q);
    for (std::size_t m = 0; m < M; ++m) {
        column.clear();
        for (std::size_t q = 0; q < Q; ++q) {
            if (ok[q]) column.push_back(results[q][m]);
        }
        out.point.push_back(stable_mean(column));
        std::sort(column.begin(), column.end());
        out.lower.push_back(quantile_sorted(column, alpha));
        out.upper.push_back(quantile_sorted(column, 1.0 - alpha));
    }
    return out;
}

ForecastCheckResult forecast_check(std::span<const double> series,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   const ForecastCheckOptions& options) {
    const std::size_t N = series.size();
    const std::size_t fl = options.forecast_len;
    const std::size_t sl = options.sliding_len;
    if (groups.empty()) throw ParameterError("forecast_check needs at least one group");
    if (fl == 0) throw ParameterError("forecast length must be positive");
    if (sl < TimeSeries::kMinLength) throw ParameterError("sliding length too small");
    if (sl + fl > N) {
        throw ParameterError("sliding length + forecast length (" + std::to_string(sl + fl) +
                             ") exceeds series length " + std::to_string(N));
    }
    const std::size_t L = options.L.value_or(sl / 2);
    WindowSpec::make(sl, L);
    for (const auto& g : groups) {
        if (g.empty()) throw ParameterError("empty group");
        for (auto i : g) {
            if (i == 0) throw ParameterError("eigentriple indices are 1-based");
        }
    }

    const std::size_t windows = N - sl - fl + 1;
    ForecastCheckResult out;
    out.windows = windows;
    out.missing.assign(groups.size(), 0);
    std::vector<double> sum(groups.size(), 0.0);

    SessionOptions sopts;
    sopts.L = L;
    sopts.kind = options.kind;
    sopts.method = options.svd_method;
    sopts.neig = options.neig;
    sopts.config = options.config;

    // Per-window results land in a table and are reduced in index order, so
    // the thread count never changes the sums.
    const std::size_t G = groups.size();
    std::vector<double> table(windows * G, std::numeric_limits<double>::quiet_NaN());
    auto run_window = [&](std::size_t w) {
        std::vector<double> train(series.begin() + static_cast<std::ptrdiff_t>(w),
                                  series.begin() + static_cast<std::ptrdiff_t>(w + sl));
        const auto check = series.subspan(w + sl, fl);
        std::optional<Session> s;
        try {
            s.emplace(TimeSeries(std::move(train)), sopts);
        } catch (const Error&) {
            return;
        }
        for (std::size_t g = 0; g < G; ++g) {
            try {
                const auto grouping = Grouping::single(groups[g]);
                const auto f = options.method == ForecastMethod::vector ? vforecast(*s, grouping, fl)
                                                                        : rforecast(*s, grouping, fl);
                double se = 0.0;
                for (std::size_t m = 0; m < fl; ++m) {
                    const double d = f[0].ahead[m] - check[m];
                    se += d * d;
                }
                table[w * G + g] = se / static_cast<double>(fl);
            } catch (const Error&) {
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, windows);
    if (threads == 1) {
        for (std::size_t w = 0; w < windows; ++w) run_window(w);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t w = t; w < windows; w += threads) run_window(w);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (std::size_t w = 0; w < windows; ++w) {
        for (std::size_t g = 0; g < G; ++g) {
            const double v = table[w * G + g];
            if (std::isfinite(v)) sum[g] += v;
            else ++out.missing[g];
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        const std::size_t good = windows - out.missing[g];
        out.mse.push_back(good ? sum[g] / static_cast<double>(good)
                               : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_index_columns(std::vector<std::string>& header, std::vector<std::vector<double>>& cols,
                         std::size_t first, std::size_t count, const std::optional<TimeIndex>& index) {
    header.push_back("step");
    std::vector<double> step(count);
    for (std::size_t i = 0; i < count; ++i) step[i] = static_cast<double>(first + i + 1);
    cols.push_back(std::move(step));
    if (index) {
        header.push_back(index->unit.empty() ? "time" : index->unit);
        std::vector<double> t(count);
        for (std::size_t i = 0; i < count; ++i) t[i] = index->at(first + i);
        cols.push_back(std::move(t));
    }
}

}  // namespace

void write_forecasts(const std::filesystem::path& path, const std::vector<ForecastResult>& results) {
    if (results.empty()) throw ValidationError("no forecasts to write");
    const auto& first = results.front();
    const std::size_t offset = first.only_new ? first.base.size() : 0;
    const std::size_t count = first.values().size();
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;
    write_index_columns(header, cols, offset, count, first.index);
    for (const auto& r : results) {
        auto v = r.values();
        if (v.size() != count) throw ValidationError("forecasts of unequal length");
        header.push_back(r.label);
        cols.push_back(std::move(v));
    }
    std::ostringstream buf;
    write_table(buf, header, cols);
    write_text(path, buf.str());
}

void write_bootstrap(const std::filesystem::path& path, const BootstrapForecast& f, bool only_new) {
    const std::size_t N = f.base.size();
    const std::size_t offset = only_new ? N : 0;
    std::vector<double> point, lower, upper;
    if (!only_new) {
        point = f.base;
        lower = f.base;
        upper = f.base;
    }
    point.insert(point.end(), f.point.begin(), f.point.end());
    lower.insert(lower.end(), f.lower.begin(), f.lower.end());
    upper.insert(upper.end(), f.upper.begin(), f.upper.end());
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;
    write_index_columns(header, cols, offset, point.size(), f.index);
    header.insert(header.end(), {"point", "lower", "upper"});
    cols.push_back(std::move(point));
    cols.push_back(std::move(lower));
    cols.push_back(std::move(upper));
    std::ostringstream buf;
    write_table(buf, header, cols);
    write_text(path, buf.str());
}

}  // namespace ssa
