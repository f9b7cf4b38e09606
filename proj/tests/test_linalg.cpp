#include "hypfred/error.hpp"
#include "hypfred/linalg.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <random>

using namespace hypfred;
using namespace hypfred::linalg;

namespace {

Eigen::MatrixXd random_matrix(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) m(r, c) = nd(gen);
    }
    return m;
}

// Q1 diag(s) Q2^T with prescribed singular values.
Eigen::MatrixXd with_spectrum(const Eigen::VectorXd& s, unsigned seed) {
    const int n = static_cast<int>(s.size());
    const Eigen::MatrixXd q1 = orthonormalize(random_matrix(n, seed));
    const Eigen::MatrixXd q2 = orthonormalize(random_matrix(n, seed + 1));
    return q1 * s.asDiagonal() * q2.transpose();
}

} // namespace

TEST(Lu, SolvesAndTransposeSolves) {
    const Eigen::MatrixXd a = random_matrix(40, 1);
    const Eigen::MatrixXd b = random_matrix(40, 2).leftCols(3);
    const LuFactorization lu(a);
    EXPECT_FALSE(lu.singular());
    EXPECT_LE((a * lu.solve(b) - b).norm(), 1e-10);
    EXPECT_LE((a.transpose() * lu.solve(b, true) - b).norm(), 1e-10);
}

TEST(Lu, ExactSingularityIsFlagged) {
    const LuFactorization lu(Eigen::MatrixXd::Zero(4, 4));
    EXPECT_TRUE(lu.singular());
    EXPECT_THROW(lu.solve(Eigen::VectorXd::Ones(4)), SpectrumError);
    EXPECT_THROW(LuFactorization(Eigen::MatrixXd::Zero(3, 4)), SpectrumError);
}

TEST(Svd, MatchesJacobiReference) {
    const Eigen::MatrixXd a = random_matrix(60, 3);
    const FullSvd svd = full_svd(a);
    const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    EXPECT_LE((svd.sigma - ref).cwiseAbs().maxCoeff(), 1e-12 * ref(0));
    EXPECT_LE((singular_values(a) - ref).cwiseAbs().maxCoeff(), 1e-12 * ref(0));
    EXPECT_LE((svd.u * svd.sigma.asDiagonal() * svd.v.transpose() - a).norm(), 1e-11);
    EXPECT_LE((svd.u.transpose() * svd.u - Eigen::MatrixXd::Identity(60, 60)).norm(), 1e-12);
}

TEST(Svd, IdentityHasUnitSpectrum) {
    const Eigen::VectorXd s = singular_values(Eigen::MatrixXd::Identity(10, 10));
    for (int i = 0; i < 10; ++i) EXPECT_EQ(s(i), 1.0);
}

TEST(Lanczos, LargestSingularValue) {
    const Eigen::MatrixXd a = random_matrix(200, 4);
    const double ref = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    EXPECT_NEAR(largest_singular_value(a), ref, 1e-10 * ref);
    EXPECT_NEAR(largest_singular_value(Eigen::MatrixXd::Identity(50, 50)), 1.0, 1e-14);
}

TEST(SubspaceIteration, ClusteredSmallestTriplets) {
    const int n = 150;
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = 1.0 + i * 0.05;
    s(n - 1) = 1e-6;  // a degenerate pair and a near-pair at the bottom
    s(n - 2) = 1e-4;
    s(n - 3) = 1e-4;
    s(n - 4) = 1.1e-3;
    std::sort(s.data(), s.data() + n, std::greater<>());
    const Eigen::MatrixXd a = with_spectrum(s, 10);
    const LuFactorization lu(a);
    const double smax = largest_singular_value(a);
    const SmallestTriplets trip = smallest_singular_triplets(a, lu, 4, smax);
    ASSERT_TRUE(trip.converged) << trip.residual.transpose();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(trip.sigma(i), s(n - 1 - i), 1e-9 * smax);
    EXPECT_LE((trip.left.transpose() * trip.left - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-10);
    EXPECT_LE((trip.right.transpose() * trip.right - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-10);
    for (int i = 0; i < 4; ++i) {
        EXPECT_LE((a * trip.right.col(i) - trip.sigma(i) * trip.left.col(i)).norm(), 1e-9 * smax);
        EXPECT_LE(trip.residual(i), 1e-9 * smax);
    }
}

TEST(SubspaceIteration, ThresholdKeepsOnlyCertifiedTriplets) {
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(80, 2.0, 1.0);
    s(79) = 1e-5;
    s(78) = 2e-5;
    const Eigen::MatrixXd a = with_spectrum(s, 20);
    const LuFactorization lu(a);
    SubspaceOptions opts;
    opts.threshold = 1e-3;
    const SmallestTriplets trip = smallest_singular_triplets(a, lu, 8, 2.0, opts);
    ASSERT_TRUE(trip.converged);
    ASSERT_EQ(trip.sigma.size(), 3);
    EXPECT_NEAR(trip.sigma(0), 1e-5, 1e-12);
    EXPECT_NEAR(trip.sigma(1), 2e-5, 1e-12);
    EXPECT_GT(trip.sigma(2), 1e-3);
}

TEST(Lanczos, SmallestSingularValueThroughTheInverse) {
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(120, 3.0, 0.9);
    s(119) = 0.85;  // clustered bottom
    const Eigen::MatrixXd a = with_spectrum(s, 30);
    EXPECT_NEAR(smallest_singular_value(LuFactorization(a)), 0.85, 1e-12);
}
