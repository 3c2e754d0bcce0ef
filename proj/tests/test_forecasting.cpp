#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "ssakit/errors.hpp"
#include "ssakit/forecasting.hpp"
#include "ssakit/parest.hpp"
#include "support.hpp"

using namespace ssa;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Session make(std::vector<double> x, std::size_t L, SvdMethod m = SvdMethod::eigen,
             std::optional<TimeIndex> index = std::nullopt) {
    SessionOptions o;
    o.L = L;
    o.method = m;
    return Session(TimeSeries(std::move(x), std::move(index)), o);
}

std::vector<std::size_t> first(std::size_t r) {
    std::vector<std::size_t> g(r);
    for (std::size_t i = 0; i < r; ++i) g[i] = i + 1;
    return g;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
    double scale = 0.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    return testing::max_abs_diff(a, b) / std::max(scale, 1e-300);
}

}  // namespace

TEST_SUITE("forecasting") {

TEST_CASE("constant series, L=2: recurrence y_i = y_{i-1}") {
    auto s = make({3, 3, 3, 3, 3, 3}, 2);
    const auto r = lrr(s, {1});
    REQUIRE(r.coef.size() == 1);
    CHECK(r.coef[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.nu2 == doctest::Approx(0.5).epsilon(1e-12));
    const auto f = rforecast(s, Grouping::single({1}), 4);
    for (double v : f[0].ahead) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
    const auto g = vforecast(s, Grouping::single({1}), 4);
    for (double v : g[0].ahead) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("linear series, L=3: double root at one") {
    std::vector<double> x(20);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = double(n + 1);
    auto s = make(x, 3);
    const auto rs = roots(lrr(s, {1, 2}));
    REQUIRE(rs.size() == 2);
    for (const auto& r : rs.roots) CHECK(std::abs(r.value - std::complex<double>(1.0, 0.0)) < 1e-6);
}

TEST_CASE("verticality is rejected") {
    // Basis containing e_L.
    MatrixXd basis = MatrixXd::Zero(5, 1);
    basis(4, 0) = 1.0;
    CHECK_THROWS_AS(lrr_from_basis(basis), VerticalityError);
    CHECK_THROWS_AS(vector_projector(basis), VerticalityError);
}

TEST_CASE("sine continuation, recurrent and vector") {
    const std::size_t N = 120;
    std::vector<double> x(N);
    for (std::size_t n = 1; n <= N; ++n) x[n - 1] = std::sin(2 * std::numbers::pi * double(n) / 12.0);
    auto s = make(x, 24);
    const auto fr = rforecast(s, Grouping::single({1, 2}), 12);
    const auto fv = vforecast(s, Grouping::single({1, 2}), 12);
    for (std::size_t m = 1; m <= 12; ++m) {
        const double truth = std::sin(2 * std::numbers::pi * double(N + m) / 12.0);
        CHECK(std::abs(fr[0].ahead[m - 1] - truth) < 1e-6);
        CHECK(std::abs(fv[0].ahead[m - 1] - truth) < 1e-6);
        CHECK(std::abs(fr[0].ahead[m - 1] - fv[0].ahead[m - 1]) < 1e-8);
    }
}

TEST_CASE("exact continuation over the finite-rank family") {
    using testing::Term;
    const std::vector<std::vector<Term>> suite = {
        {{2.0, 0, 1.0, 0.0, 0.0}},
        {{0.5, 1, 1.0, 0.0, 0.0}, {1.0, 0, 1.0, 0.0, 0.0}},
        {{1.0, 0, 1.02, 0.0, 0.0}},
        {{1.0, 0, 1.0, 0.1, 0.3}},
        {{1.0, 0, 0.99, 1.0 / 7.0, 1.0}},
        {{1.0, 0, 1.0, 1.0 / 12.0, 0.0}, {0.5, 0, 1.0, 1.0 / 5.0, 0.7}, {1.0, 0, 1.01, 0.0, 0.0}},
        {{1.0, 0, 1.0, 1.0 / 12.0, 0.2}, {1.0, 1, 1.0, 0.0, 0.0}, {3.0, 0, 1.0, 0.0, 0.0}, {0.2, 0, 0.98, 0.3, 0.0}},
    };
    const std::size_t N = 100, M = 20;
    for (const auto& terms : suite) {
        const auto r = static_cast<std::size_t>(testing::total_rank(terms));
        const auto x = testing::signal(terms, 1, N);
        const auto truth = testing::signal(terms, N + 1, M);
        auto s = make(x, 40);
        const auto fr = rforecast(s, Grouping::single(first(r)), M);
        const auto fv = vforecast(s, Grouping::single(first(r)), M);
        const auto fs = vforecast(s, Grouping::single(first(r)), M, true, VectorForecastOptions{true});
        CHECK(max_rel(fr[0].ahead, truth) < 1e-6);
        CHECK(max_rel(fv[0].ahead, truth) < 1e-6);
        CHECK(max_rel(fr[0].ahead, fv[0].ahead) < 1e-8);
        CHECK(max_rel(fs[0].ahead, fv[0].ahead) < 1e-8);
    }
}

TEST_CASE("recurrent forecast trajectory is Hankel") {
    // Z_i = (Z_{i-1}[2..L], R^T Z_{i-1}[2..L]) stacked after the reconstructed lagged vectors.
    auto s = make(testing::random_series(80, 14), 20);
    const auto group = std::vector<std::size_t>{1, 2, 3};
    const auto rule = lrr(s, group);
    const auto f = rforecast(s, Grouping::single(group), 10, false);
    const auto y = f[0].values();
    const std::size_t L = 20, K = 61;
    MatrixXd Z(L, K + 10);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = 0; l < L; ++l) Z(Eigen::Index(l), Eigen::Index(k)) = f[0].base[l + k];
    for (std::size_t k = K; k < K + 10; ++k) {
        for (std::size_t l = 0; l + 1 < L; ++l) Z(Eigen::Index(l), Eigen::Index(k)) = Z(Eigen::Index(l + 1), Eigen::Index(k - 1));
        double next = 0.0;
        for (std::size_t j = 1; j < L; ++j) next += rule.coef[j - 1] * Z(Eigen::Index(L - j), Eigen::Index(k - 1));
        Z(Eigen::Index(L - 1), Eigen::Index(k)) = next;
    }
    for (Eigen::Index k = 0; k < Z.cols(); ++k)
        for (Eigen::Index l = 0; l < Z.rows(); ++l) CHECK(std::abs(Z(l, k) - y[std::size_t(l + k)]) < 1e-10);
}

TEST_CASE("vector projector is symmetric and idempotent") {
    auto s = make(testing::random_series(150, 21), 50);
    MatrixXd P(50, 5);
    for (Eigen::Index j = 0; j < 5; ++j) P.col(j) = s.eigenvector(std::size_t(j));
    const MatrixXd Pi = vector_projector(P);
    CHECK((Pi * Pi - Pi).norm() <= 1e-9);
    CHECK((Pi - Pi.transpose()).norm() <= 1e-12);
    // Projects onto the span of the truncated eigenvectors.
    const MatrixXd Vt = P.topRows(49);
    CHECK((Pi * Vt - Vt).norm() < 1e-9);
}

TEST_CASE("subspace and dense vector forecasts agree on noisy data") {
    auto s = make(testing::random_series(200, 31), 60);
    const auto g = Grouping::parse("1-4|1,3,5");
    const auto a = vforecast(s, g, 25);
    const auto b = vforecast(s, g, 25, true, VectorForecastOptions{true});
    for (std::size_t j = 0; j < 2; ++j) CHECK(max_rel(b[j].ahead, a[j].ahead) < 1e-8);
}

TEST_CASE("constant series vector forecast is constant") {
    auto s = make(std::vector<double>(50, -1.5), 10);
    const auto f = vforecast(s, Grouping::single({1}), 7);
    for (double v : f[0].ahead) CHECK(v == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("only_new and the extended index") {
    auto s = make(testing::random_series(30, 2), 10, SvdMethod::eigen, TimeIndex{2000.0, 0.25, ""});
    const auto f = rforecast(s, Grouping::single({1, 2}), 5, true);
    CHECK(f[0].values().size() == 5);
    CHECK(f[0].values_index()->start == doctest::Approx(2007.5));
    const auto g = rforecast(s, Grouping::single({1, 2}), 5, false);
    CHECK(g[0].values().size() == 35);
    CHECK(g[0].values_index()->start == 2000.0);
}

TEST_CASE("quantile type 7") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == 2.5);
    CHECK(quantile_sorted(v, 0.025) == doctest::Approx(1.075));
}

TEST_CASE("bootstrap of a noise-free signal has zero width") {
    std::vector<double> x(96);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = 2.0 + std::sin(2 * std::numbers::pi * double(n + 1) / 12.0);
    auto s = make(x, 36);
    BootstrapOptions o;
    o.replicates = 20;
    o.seed = 5;
    const auto b = bforecast(s, {1, 2, 3}, 6, o);
    const auto det = rforecast(s, Grouping::single({1, 2, 3}), 6);
    for (std::size_t m = 0; m < 6; ++m) {
        CHECK(b.upper[m] - b.lower[m] == 0.0);
        CHECK(std::abs(b.point[m] - det[0].ahead[m]) < 1e-9);
    }
    CHECK(b.dropped == 0);
}

TEST_CASE("bootstrap determinism and ordering") {
    std::vector<double> x = testing::random_series(120, 3);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.3 * x[n] + std::sin(2 * std::numbers::pi * double(n) / 10.0);
    auto s = make(x, 40);
    BootstrapOptions o;
    o.replicates = 40;
    o.seed = 123;
    const auto a = bforecast(s, {1, 2}, 8, o);
    o.threads = 3;
    const auto b = bforecast(s, {1, 2}, 8, o);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.point == b.point);
    for (std::size_t m = 0; m < 8; ++m) {
        CHECK(a.lower[m] <= a.point[m]);
        CHECK(a.point[m] <= a.upper[m]);
        CHECK(a.lower[m] < a.upper[m]);
    }
    o.seed = 124;
    const auto c = bforecast(s, {1, 2}, 8, o);
    CHECK(c.lower != a.lower);
    o.method = ForecastMethod::vector;
    const auto v = bforecast(s, {1, 2}, 8, o);
    CHECK(v.point.size() == 8);
}

TEST_CASE("bootstrap parameter checks") {
    auto s = make(testing::random_series(60, 1), 20);
    BootstrapOptions o;
    o.level = 1.0;
    CHECK_THROWS_AS(bforecast(s, {1}, 3, o), ParameterError);
    o.level = 0.9;
    o.replicates = 1;
    CHECK_THROWS_AS(bforecast(s, {1}, 3, o), ParameterError);
}

TEST_CASE("forecast_check: exact signal gives zero error") {
    std::vector<double> x(60);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * std::numbers::pi * double(n) / 6.0);
    ForecastCheckOptions o;
    o.forecast_len = 2;
    o.sliding_len = 40;
    o.L = 18;
    const auto r = forecast_check(x, {{1, 2}, {1}}, o);
    CHECK(r.windows == 19);
    CHECK(r.mse[0] < 1e-16);
    CHECK(r.mse[1] > 1e-4);
    CHECK(r.missing[0] == 0);
}

TEST_CASE("forecast_check: matches a direct loop") {
    const auto x = testing::random_series(70, 8);
    ForecastCheckOptions o;
    o.forecast_len = 3;
    o.sliding_len = 50;
    o.L = 20;
    o.method = ForecastMethod::vector;
    const auto r = forecast_check(x, {{1, 2, 3}}, o);
    double sum = 0.0;
    for (std::size_t i = 0; i + 50 + 3 <= 70; ++i) {
        auto s = make(std::vector<double>(x.begin() + long(i), x.begin() + long(i + 50)), 20);
        const auto f = vforecast(s, Grouping::single({1, 2, 3}), 3);
        double se = 0.0;
        for (std::size_t m = 0; m < 3; ++m) se += std::pow(f[0].ahead[m] - x[i + 50 + m], 2);
        sum += se / 3.0;
    }
    CHECK(r.mse[0] == doctest::Approx(sum / 18.0).epsilon(1e-12));
}

TEST_CASE("forecast_check: failures are recorded, parameters checked") {
    // Series with a vertical leading eigenvector: forecasts are undefined.
    std::vector<double> x(30, 0.0);
    x[9] = 1.0;
    ForecastCheckOptions o;
    o.forecast_len = 1;
    o.sliding_len = 10;
    o.L = 5;
    const auto r = forecast_check(x, {{1}}, o);
    CHECK(r.missing[0] >= 1);
    o.sliding_len = 30;
    CHECK_THROWS_AS(forecast_check(x, {{1}}, o), ParameterError);
}

TEST_CASE("forecast csv layout") {
    auto s = make(testing::random_series(40, 9), 12, SvdMethod::eigen, TimeIndex{1.0, 1.0, ""});
    const auto f = rforecast(s, Grouping::parse("1|1,2"), 3);
    const auto path = std::filesystem::temp_directory_path() / "ssakit_fc.csv";
    write_forecasts(path, f);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,time,F1,F2");
    std::getline(in, line);
    CHECK(line.rfind("41,41,", 0) == 0);
}

}  // TEST_SUITE
