#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdm/classical_dm.hpp"
#include "qdm/dataset.hpp"
#include "qdm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

using namespace qdm;

namespace {

DataSet random_points(int n, int d, unsigned seed, double spread = 1.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    DataSet ds;
    ds.name = "random";
    ds.points.resize(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) ds.points(i, j) = spread * g(rng);
    return ds;
}

DataSet two_points_1d(double gap) {
    DataSet ds;
    ds.points.resize(2, 1);
    ds.points << 0.0, gap;
    return ds;
}

// Brute-force kernel, coded independently of kernel_matrix.
Mat kernel_oracle(const Mat& pts) {
    const int n = static_cast<int>(pts.rows());
    Mat w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w(i, j) = std::exp(-0.5 * (pts.row(i) - pts.row(j)).squaredNorm());
    return w;
}

} // namespace

TEST_CASE("kernel of two identical points") {
    DataSet ds = two_points_1d(0.0);
    auto ks = kernel_matrix(ds);
    CHECK(ks.W(0, 1) == 1.0);
    CHECK(ks.W(1, 0) == 1.0);
    CHECK(ks.D(0) == doctest::Approx(2.0));
    CHECK(ks.D(1) == doctest::Approx(2.0));
}

TEST_CASE("kernel of 1-D points {0, sqrt 2} has off-diagonal e^-1") {
    auto ks = kernel_matrix(two_points_1d(std::sqrt(2.0)));
    CHECK(ks.W(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("kernel matches the brute-force double loop") {
    auto ds = random_points(5, 3, 21);
    auto ks = kernel_matrix(ds);
    CHECK((ks.W - kernel_oracle(ds.points)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two-point transition matrix closed form") {
    auto ks = transition_matrix(kernel_matrix(two_points_1d(1.3)));
    const double k = ks.W(0, 1);
    CHECK(ks.P(0, 0) == doctest::Approx(1.0 / (1.0 + k)).epsilon(1e-14));
    CHECK(ks.P(0, 1) == doctest::Approx(k / (1.0 + k)).epsilon(1e-14));
    CHECK(ks.P(1, 0) == doctest::Approx(k / (1.0 + k)).epsilon(1e-14));
}

TEST_CASE("row sums of P equal 1 within 1e-12") {
    for (unsigned seed : {1u, 2u, 3u}) {
        auto ks = transition_matrix(kernel_matrix(random_points(9, 4, seed)));
        const Vec rows = ks.P.rowwise().sum();
        CHECK((rows.array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK((ks.P - ks.D.cwiseInverse().asDiagonal() * ks.W).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("eigenvalues of P equal eigenvalues of S (similarity)") {
    auto ks = transition_matrix(kernel_matrix(random_points(6, 3, 5)));
    // generic nonsymmetric solver on P as the independent route
    Eigen::EigenSolver<Mat> gen(ks.P);
    Vec from_p = gen.eigenvalues().real();
    Eigen::SelfAdjointEigenSolver<Mat> sym(ks.S);
    Vec from_s = sym.eigenvalues();
    std::sort(from_p.begin(), from_p.end());
    std::sort(from_s.begin(), from_s.end());
    CHECK(gen.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-10);
    CHECK((from_p - from_s).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two-point eigensystem is analytic") {
    auto ks = transition_matrix(kernel_matrix(two_points_1d(0.9)));
    const double k = ks.W(0, 1);
    auto es = eigendecompose(ks);
    CHECK(es.lambdas(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.lambdas(1) == doctest::Approx((1.0 - k) / (1.0 + k)).epsilon(1e-12));
}

TEST_CASE("spectrum lies in [-1e-10, 1+1e-10] and lambda_0 = 1") {
    for (unsigned seed : {4u, 8u, 15u}) {
        auto ks = transition_matrix(kernel_matrix(random_points(12, 3, seed)));
        auto es = eigendecompose(ks);
        CHECK(es.lambdas.maxCoeff() <= 1.0 + 1e-10);
        CHECK(es.lambdas.minCoeff() >= -1e-10);
        CHECK(std::abs(es.lambdas(0) - 1.0) < 1e-10);
        // exactly one eigenvalue equals 1 for the connected kernel graph
        int ones = 0;
        for (int i = 0; i < es.n(); ++i)
            if (es.lambdas(i) > 1.0 - 1e-8) ++ones;
        CHECK(ones == 1);
    }
}

TEST_CASE("v_0 is proportional to the all-ones vector") {
    auto ks = transition_matrix(kernel_matrix(random_points(10, 2, 3)));
    auto es = eigendecompose(ks);
    const Vec v0 = es.right_vecs.col(0);
    CHECK((v0.array() - v0(0)).abs().maxCoeff() < 1e-10);
    CHECK(v0(0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenpair residuals and biorthogonality") {
    auto ks = transition_matrix(kernel_matrix(random_points(11, 3, 17)));
    auto es = eigendecompose(ks);
    for (int i = 0; i < es.n(); ++i) {
        const Vec rv = ks.P * es.right_vecs.col(i) - es.lambdas(i) * es.right_vecs.col(i);
        const Vec lv = ks.P.transpose() * es.left_vecs.col(i) - es.lambdas(i) * es.left_vecs.col(i);
        CHECK(rv.norm() < 1e-8);
        CHECK(lv.norm() < 1e-8);
        for (int j = 0; j < es.n(); ++j) {
            const double dot = es.left_vecs.col(i).dot(es.right_vecs.col(j));
            if (i == j)
                CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
            else if (std::abs(es.lambdas(i) - es.lambdas(j)) > 1e-9)
                CHECK(std::abs(dot) < 1e-8);
        }
    }
    // u_0 is the stationary distribution
    CHECK(es.left_vecs.col(0).sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((es.left_vecs.col(0) - ks.D / ks.D.sum()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("diffusion map at t=0 returns the eigenvectors") {
    auto ks = transition_matrix(kernel_matrix(random_points(7, 2, 9)));
    auto es = eigendecompose(ks);
    auto emb = diffusion_map(es, 0, 3);
    for (int k = 1; k <= 3; ++k)
        CHECK((emb.coords.col(k - 1) - es.right_vecs.col(k)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("diffusion map decays monotonically in t") {
    auto ks = transition_matrix(kernel_matrix(random_points(7, 2, 10)));
    auto es = eigendecompose(ks);
    double prev = diffusion_map(es, 1, 2).coords.cwiseAbs().maxCoeff();
    for (int t = 2; t <= 24; t += 2) {
        const double cur = diffusion_map(es, t, 2).coords.cwiseAbs().maxCoeff();
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("diffusion map rejects m out of range") {
    auto ks = transition_matrix(kernel_matrix(random_points(6, 2, 12)));
    auto es = eigendecompose(ks);
    CHECK_THROWS_AS(diffusion_map(es, 1, 0), ParameterError);
    CHECK_THROWS_AS(diffusion_map(es, 1, 6), ParameterError);
}

TEST_CASE("diffusion distance of a point to itself is zero") {
    auto ks = transition_matrix(kernel_matrix(random_points(5, 2, 13)));
    auto es = eigendecompose(ks);
    CHECK(diffusion_distance(ks, es, 2, 2, 3) == 0.0);
}

TEST_CASE("two-point diffusion distance closed form") {
    auto ks = transition_matrix(kernel_matrix(two_points_1d(1.1)));
    auto es = eigendecompose(ks);
    // hand expansion at N=2: u0 = (1/2, 1/2), both columns contribute the
    // same squared difference
    const double diff = ks.P(0, 0) - ks.P(1, 0);
    const double expected = std::abs(diff) * std::sqrt(2.0 + 2.0);
    CHECK(diffusion_distance(ks, es, 0, 1, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("diffusion distance equals embedding distance at m = N-1") {
    auto ks = transition_matrix(kernel_matrix(random_points(8, 3, 14)));
    auto es = eigendecompose(ks);
    auto emb = diffusion_map(es, 2, 7);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double dd = diffusion_distance(ks, es, i, j, 2);
            const double ed = (emb.coords.row(i) - emb.coords.row(j)).norm();
            CHECK(std::abs(dd * dd - ed * ed) < 1e-8);
        }
}

TEST_CASE("embedding identity at N=2 is exact to 1e-12") {
    auto ks = transition_matrix(kernel_matrix(two_points_1d(0.7)));
    auto es = eigendecompose(ks);
    CHECK(verify_embedding_identity(ks, es, 1) < 1e-12);
}

TEST_CASE("embedding identity holds for random N=32 datasets") {
    auto ks = transition_matrix(kernel_matrix(random_points(32, 4, 23)));
    auto es = eigendecompose(ks);
    for (int t : {1, 2, 5}) CHECK(verify_embedding_identity(ks, es, t) < 1e-8);
}

TEST_CASE("embedding identity for identical points: both sides vanish") {
    DataSet ds;
    ds.points = Mat::Zero(4, 2);
    auto ks = transition_matrix(kernel_matrix(ds));
    auto es = eigendecompose(ks);
    CHECK(verify_embedding_identity(ks, es, 1) < 1e-12);
    CHECK(diffusion_distance(ks, es, 0, 3, 1) < 1e-12);
}

TEST_CASE("P^t by repeated multiplication matches the spectral sum") {
    auto ks = transition_matrix(kernel_matrix(random_points(16, 3, 31)));
    auto es = eigendecompose(ks);
    Mat pt = Mat::Identity(16, 16);
    for (int t = 1; t <= 8; ++t) {
        pt = pt * ks.P;
        Mat spectral = Mat::Zero(16, 16);
        for (int i = 0; i < 16; ++i)
            spectral += std::pow(es.lambdas(i), t) * es.right_vecs.col(i) *
                        es.left_vecs.col(i).transpose();
        CHECK((pt - spectral).cwiseAbs().maxCoeff() < 1e-8);
    }
}
