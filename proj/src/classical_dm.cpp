#include "qdm/classical_dm.hpp"
#include "qdm/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdm {

KernelSystem kernel_matrix(const DataSet& X) {
    const int n = X.n();
    if (n < 2) throw ParameterError("classical_dm.kernel_matrix", "need at least 2 points");
    if (!X.points.allFinite())
        throw ParameterError("classical_dm.kernel_matrix", "points contain non-finite values");

    KernelSystem ks;
    ks.W.resize(n, n);
    for (int i = 0; i < n; ++i) {
        ks.W(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (X.points.row(i) - X.points.row(j)).squaredNorm();
            const double w = std::exp(-d2 / 2.0);
            ks.W(i, j) = w;
            ks.W(j, i) = w;
        }
    }
    ks.D = ks.W.rowwise().sum();
    return ks;
}

KernelSystem transition_matrix(KernelSystem ks) {
    if (ks.D.minCoeff() <= 0.0)
        throw NumericalError("classical_dm.transition_matrix",
                             "nonpositive degree; impossible for a Gaussian kernel");
    const Vec inv_d = ks.D.cwiseInverse();
    const Vec inv_sqrt_d = ks.D.cwiseSqrt().cwiseInverse();
    ks.P = inv_d.asDiagonal() * ks.W;
    ks.S = inv_sqrt_d.asDiagonal() * ks.W * inv_sqrt_d.asDiagonal();
    return ks;
}

EigenSystem eigendecompose(const KernelSystem& ks) {
    if (!ks.has_transition())
        throw ParameterError("classical_dm.eigendecompose", "transition_matrix not applied yet");
    const int n = ks.n();

    Eigen::SelfAdjointEigenSolver<Mat> solver(ks.S);
    if (solver.info() != Eigen::Success)
        throw NumericalError("classical_dm.eigendecompose",
                             "symmetric eigensolver failed (n=" + std::to_string(n) + ")");

    // Ascending from Eigen; stable descending reorder.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });

    EigenSystem es;
    es.lambdas.resize(n);
    es.psis.resize(n, n);
    es.right_vecs.resize(n, n);
    es.left_vecs.resize(n, n);
    es.degrees = ks.D;
    es.degree_sum = ks.D.sum();

    const Vec inv_sqrt_d = ks.D.cwiseSqrt().cwiseInverse();
    const Vec sqrt_d = ks.D.cwiseSqrt();
    const double root_total = std::sqrt(es.degree_sum);

    for (int k = 0; k < n; ++k) {
        es.lambdas(k) = solver.eigenvalues()(order[k]);
        Vec psi = solver.eigenvectors().col(order[k]);
        int arg = 0;
        psi.cwiseAbs().maxCoeff(&arg);
        if (psi(arg) < 0.0) psi = -psi;
        psi /= psi.norm();
        es.psis.col(k) = psi;
        es.right_vecs.col(k) = root_total * inv_sqrt_d.cwiseProduct(psi);
        es.left_vecs.col(k) = sqrt_d.cwiseProduct(psi) / root_total;
    }
    return es;
}

DiffusionEmbedding diffusion_map(const EigenSystem& es, int t_steps, int m) {
    const int n = es.n();
    if (t_steps < 0) throw ParameterError("classical_dm.diffusion_map", "t must be >= 0");
    if (m < 1 || m > n - 1)
        throw ParameterError("classical_dm.diffusion_map",
                             "m must be in [1, N-1], got " + std::to_string(m));
    DiffusionEmbedding emb;
    emb.t_steps = t_steps;
    emb.m = m;
    emb.coords.resize(n, m);
    for (int k = 1; k <= m; ++k)
        emb.coords.col(k - 1) = std::pow(es.lambdas(k), t_steps) * es.right_vecs.col(k);
    return emb;
}

namespace {

Mat matrix_power(const Mat& p, int t) {
    Mat out = Mat::Identity(p.rows(), p.cols());
    for (int s = 0; s < t; ++s) out = out * p;
    return out;
}

} // namespace

double diffusion_distance(const KernelSystem& ks, const EigenSystem& es,
                          int i, int j, int t) {
    const int n = ks.n();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw ParameterError("classical_dm.diffusion_distance", "index out of range");
    if (es.n() != n)
        throw ParameterError("classical_dm.diffusion_distance", "eigensystem size mismatch");
    const Mat pt = matrix_power(ks.P, t);
    const Vec u0 = ks.D / ks.D.sum();
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double diff = pt(i, k) - pt(j, k);
        acc += diff * diff / u0(k);
    }
    return std::sqrt(acc);
}

double verify_embedding_identity(const KernelSystem& ks, const EigenSystem& es, int t) {
    const int n = ks.n();
    const Mat pt = matrix_power(ks.P, t);
    const Vec u0 = ks.D / ks.D.sum();
    const DiffusionEmbedding emb = diffusion_map(es, t, n - 1);

    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dist2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double diff = pt(i, k) - pt(j, k);
                dist2 += diff * diff / u0(k);
            }
            const double emb2 = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
            worst = std::max(worst, std::abs(dist2 - emb2));
        }
    return worst;
}

} // namespace qdm
