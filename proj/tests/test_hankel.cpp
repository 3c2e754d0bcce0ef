#include "doctest.h"

#include <numeric>
#include <thread>

#include "ssakit/errors.hpp"
#include "ssakit/hankel.hpp"
#include "ssakit/series_io.hpp"
#include "support.hpp"

using namespace ssa;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("hankel") {

TEST_CASE("window validation") {
    CHECK_THROWS_AS(WindowSpec::make(5, 1), ParameterError);
    CHECK_THROWS_AS(WindowSpec::make(5, 5), ParameterError);
    CHECK_THROWS_AS(WindowSpec::make(10, 11), ParameterError);
    const auto s = WindowSpec::make(5, 3);
    CHECK(s.K() == 3);
    const std::vector<double> x{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(HankelOperator(x, 1), ParameterError);
    CHECK_THROWS_AS(HankelOperator(x, 5), ParameterError);
}

TEST_CASE("antidiagonal counts") {
    CHECK(antidiag_counts(WindowSpec::make(5, 3)) == std::vector<std::size_t>{1, 2, 3, 2, 1});
    CHECK(antidiag_counts(WindowSpec::make(4, 2)) == std::vector<std::size_t>{1, 2, 2, 1});
    for (std::size_t N = 3; N < 40; ++N) {
        for (std::size_t L = 2; L < N; ++L) {
            const auto spec = WindowSpec::make(N, L);
            const auto c = antidiag_counts(spec);
            std::vector<std::size_t> brute(N, 0);
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t k = 0; k < spec.K(); ++k) ++brute[l + k];
            REQUIRE(c == brute);
            CHECK(std::accumulate(c.begin(), c.end(), std::size_t{0}) == L * spec.K());
        }
    }
}

TEST_CASE("dense realization of 1..5 with L=3") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const HankelOperator op(x, 3);
    MatrixXd expected(3, 3);
    expected << 1, 2, 3, 2, 3, 4, 3, 4, 5;
    CHECK(op.dense() == expected);
    CHECK(hmatvec(op, VectorXd::Ones(3)) == VectorXd((VectorXd(3) << 6, 9, 12).finished()));
    CHECK(hmatvec_t(op, VectorXd::Unit(3, 0)).isApprox(VectorXd((VectorXd(3) << 1, 2, 3).finished()), 1e-14));
    CHECK(hmatvec_t(op, VectorXd::Zero(3)).isZero(0.0));
}

TEST_CASE("dense realization matches element-wise construction") {
    const auto x = testing::random_series(200, 7);
    const HankelOperator op(x, 100);
    CHECK(op.dense() == testing::naive_trajectory(x, 100));
    CHECK(trajectory_matrix(x, 100) == testing::naive_trajectory(x, 100));
}

TEST_CASE("constant ones: first column") {
    const std::vector<double> x(30, 1.0);
    const HankelOperator op(x, 12);
    const VectorXd col = hmatvec(op, VectorXd::Unit(static_cast<Eigen::Index>(op.cols()), 0));
    CHECK((col - VectorXd::Ones(12)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("canonical basis vectors extract columns exactly") {
    const auto x = testing::random_series(37, 11);
    const HankelOperator op(x, 15);
    const MatrixXd X = testing::naive_trajectory(x, 15);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const VectorXd c = op.apply(VectorXd::Unit(X.cols(), j));
        CHECK((c - X.col(j)).cwiseAbs().maxCoeff() <= 1e-14 * X.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("matvec and transpose agree with the dense oracle") {
    std::mt19937_64 rng(3);
    for (std::size_t N : {3, 4, 17, 64, 101, 300, 500}) {
        for (std::size_t L : {std::size_t{2}, N / 3 + 1, N / 2, N - 1}) {
            if (L < 2 || L >= N) continue;
            const auto x = testing::random_series(N, N * 31 + L);
            const HankelOperator op(x, L);
            const MatrixXd X = testing::naive_trajectory(x, L);
            const VectorXd v = testing::random_vector(X.cols(), rng);
            const VectorXd u = testing::random_vector(X.rows(), rng);
            CHECK(testing::rel_err(op.apply(v), X * v) < 1e-10);
            CHECK(testing::rel_err(op.apply_transpose(u), X.transpose() * u) < 1e-10);
            // adjointness
            const double lhs = op.apply(v).dot(u);
            const double rhs = v.dot(op.apply_transpose(u));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)) * X.norm());
        }
    }
}

TEST_CASE("operator is linear") {
    std::mt19937_64 rng(5);
    const auto x = testing::random_series(150, 9);
    const HankelOperator op(x, 60);
    const VectorXd a = testing::random_vector(91, rng), b = testing::random_vector(91, rng);
    const double alpha = 2.5, beta = -0.75;
    const VectorXd lhs = op.apply(alpha * a + beta * b);
    const VectorXd rhs = alpha * op.apply(a) + beta * op.apply(b);
    CHECK(testing::rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("dimension mismatch is a parameter error") {
    const auto x = testing::random_series(20, 1);
    const HankelOperator op(x, 8);
    CHECK_THROWS_AS(op.apply(VectorXd::Zero(8)), ParameterError);
    CHECK_THROWS_AS(op.apply_transpose(VectorXd::Zero(13)), ParameterError);
    CHECK_THROWS_AS(op.hankelize_rank1(VectorXd::Zero(7), VectorXd::Zero(13)), ParameterError);
    CHECK_THROWS_AS(hankelize_matrix(MatrixXd::Zero(0, 3)), ParameterError);
}

TEST_CASE("rank-one hankelization: hand examples") {
    const auto a = hankelize_rank1(VectorXd::Ones(2), VectorXd::Ones(3));
    REQUIRE(a.size() == 4);
    for (double v : a) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    const auto b = hankelize_rank1((VectorXd(2) << 1, 3).finished(), (VectorXd(2) << 1, 2).finished());
    REQUIRE(b.size() == 3);
    CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(b[2] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("rank-one hankelization matches explicit averaging") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::Index L = 2 + static_cast<Eigen::Index>(rng() % 60);
        const Eigen::Index K = 2 + static_cast<Eigen::Index>(rng() % 80);
        const VectorXd u = testing::random_vector(L, rng), v = testing::random_vector(K, rng);
        const auto fast = hankelize_rank1(u, v);
        const auto slow = testing::naive_hankelize(u * v.transpose());
        CHECK(testing::max_abs_diff(fast, slow) < 1e-12 * std::max(1.0, u.norm() * v.norm()));
    }
    const VectorXd u = testing::random_vector(40, rng), v = testing::random_vector(61, rng);
    CHECK(testing::max_abs_diff(hankelize_rank1(u, v), testing::naive_hankelize(u * v.transpose())) < 1e-12);
}

TEST_CASE("dense hankelization: hand example and fixed point") {
    MatrixXd Y(2, 2);
    Y << 1, 2, 3, 4;
    CHECK(hankelize_matrix(Y) == std::vector<double>{1, 2.5, 4});
    const auto x = testing::random_series(90, 23);
    const HankelOperator op(x, 33);
    CHECK(testing::max_abs_diff(hankelize_matrix(op.dense()), x) < 1e-12);
}

TEST_CASE("dense hankelization is linear") {
    std::mt19937_64 rng(29);
    const MatrixXd A = MatrixXd::NullaryExpr(12, 20, [&] { return std::normal_distribution<double>()(rng); });
    const MatrixXd B = MatrixXd::NullaryExpr(12, 20, [&] { return std::normal_distribution<double>()(rng); });
    const auto sum = hankelize_matrix(A + B);
    const auto a = hankelize_matrix(A), b = hankelize_matrix(B);
    for (std::size_t s = 0; s < sum.size(); ++s) CHECK(std::abs(sum[s] - a[s] - b[s]) < 1e-12);
}

TEST_CASE("full SVD hankelized term by term returns the series") {
    const auto x = testing::random_series(64, 41);
    const MatrixXd X = testing::naive_trajectory(x, 20);
    Eigen::JacobiSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const HankelOperator op(x, 20);
    std::vector<double> acc(x.size(), 0.0);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const auto part = op.hankelize_rank1(svd.singularValues()[i] * svd.matrixU().col(i), svd.matrixV().col(i));
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += part[s];
    }
    CHECK(testing::max_abs_diff(acc, x) < 1e-9);
}

TEST_CASE("Frobenius norm from weights") {
    const auto x = testing::random_series(77, 2);
    const HankelOperator op(x, 30);
    CHECK(op.frobenius_norm_squared() == doctest::Approx(op.dense().squaredNorm()).epsilon(1e-12));
}

TEST_CASE("concurrent products give identical results") {
    const auto x = testing::random_series(1000, 99);
    const HankelOperator op(x, 400);
    std::mt19937_64 rng(1);
    const VectorXd v = testing::random_vector(601, rng);
    const VectorXd ref = op.apply(v);
    std::vector<VectorXd> out(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { out[static_cast<std::size_t>(t)] = op.apply(v); });
    for (auto& t : pool) t.join();
    for (const auto& o : out) CHECK(o == ref);
}

TEST_CASE("embed uses the series values") {
    const TimeSeries s({1, 2, 3, 4, 5});
    CHECK(embed(s, 3).dense()(2, 2) == 5.0);
}

}  // TEST_SUITE
