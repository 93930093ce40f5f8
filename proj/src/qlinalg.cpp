#include "qdm/qlinalg.hpp"
#include "qdm/classical_dm.hpp"
#include "qdm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numeric>

namespace qdm {

CMat kron(const CMat& a, const CMat& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

CVec kron_vec(const CVec& a, const CVec& b) {
    CVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

double max_abs(const CMat& a) {
    return a.cwiseAbs().maxCoeff();
}

double spectral_norm(const CMat& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<CMat> svd(a);
    return svd.singularValues()(0);
}

bool approx_hermitian(const CMat& a, double tol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool approx_unitary(const CMat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a.adjoint() * a - CMat::Identity(a.rows(), a.cols())) <= tol;
}

DensityOp DensityOp::checked(CMat m, const char* stage) {
    if (m.rows() != m.cols()) throw ParameterError(stage, "density operator must be square");
    if (!approx_hermitian(m, 1e-10)) throw ParameterError(stage, "density operator must be Hermitian");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw ParameterError(stage, "density operator trace is " + std::to_string(tr) + ", expected 1");
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ParameterError(stage, "density operator has a negative eigenvalue");
    return DensityOp{std::move(m)};
}

UnitaryOp UnitaryOp::checked(CMat m, const char* stage) {
    if (!approx_unitary(m, 1e-10)) throw ParameterError(stage, "matrix is not unitary");
    return UnitaryOp{std::move(m)};
}

QuantumState QuantumState::checked(CVec a, std::vector<int> shape, const char* stage) {
    long prod = 1;
    for (int s : shape) {
        if (s <= 0) throw ParameterError(stage, "register dimensions must be positive");
        prod *= s;
    }
    if (prod != a.size())
        throw ParameterError(stage, "register shape does not match amplitude count");
    if (std::abs(a.norm() - 1.0) > 1e-10)
        throw ParameterError(stage, "state is not normalized");
    return QuantumState{std::move(a), std::move(shape)};
}

namespace {

// Dimensions to the left of / at / to the right of one register.
struct RegisterSplit {
    long left = 1, mid = 1, right = 1;
};

RegisterSplit split_shape(const std::vector<int>& shape, int reg) {
    RegisterSplit s;
    for (int r = 0; r < static_cast<int>(shape.size()); ++r) {
        if (r < reg) s.left *= shape[r];
        else if (r == reg) s.mid = shape[r];
        else s.right *= shape[r];
    }
    return s;
}

} // namespace

Vec QuantumState::register_marginal(int reg) const {
    const auto s = split_shape(shape, reg);
    Vec probs = Vec::Zero(s.mid);
    for (long l = 0; l < s.left; ++l)
        for (long k = 0; k < s.mid; ++k) {
            const long base = (l * s.mid + k) * s.right;
            probs(k) += amps.segment(base, s.right).squaredNorm();
        }
    return probs;
}

std::pair<QuantumState, double> QuantumState::project(int reg, int outcome) const {
    const auto s = split_shape(shape, reg);
    if (outcome < 0 || outcome >= s.mid)
        throw ParameterError("qlinalg.project", "outcome out of register range");
    CVec kept(s.left * s.right);
    for (long l = 0; l < s.left; ++l) {
        const long base = (l * s.mid + outcome) * s.right;
        kept.segment(l * s.right, s.right) = amps.segment(base, s.right);
    }
    const double prob = kept.squaredNorm();
    QuantumState out;
    out.shape = shape;
    out.shape.erase(out.shape.begin() + reg);
    if (out.shape.empty()) out.shape.push_back(1);
    out.amps = prob > 0.0 ? CVec(kept / std::sqrt(prob)) : kept;
    return {std::move(out), prob};
}

CMat QuantumState::reduced_density(int keep_reg) const {
    const auto s = split_shape(shape, keep_reg);
    CMat rho = CMat::Zero(s.mid, s.mid);
    for (long l = 0; l < s.left; ++l)
        for (long a = 0; a < s.mid; ++a)
            for (long b = 0; b < s.mid; ++b) {
                const long base_a = (l * s.mid + a) * s.right;
                const long base_b = (l * s.mid + b) * s.right;
                rho(a, b) += amps.segment(base_a, s.right)
                                 .dot(amps.segment(base_b, s.right));
            }
    // Eigen's dot conjugates the left argument; rho(a,b) = sum psi_a psi_b^*
    // needs the opposite order, fix by conjugating.
    return rho.conjugate();
}

QuantumState basis_state(const std::vector<int>& shape, long index) {
    long prod = 1;
    for (int s : shape) prod *= s;
    CVec a = CVec::Zero(prod);
    a(index) = 1.0;
    return QuantumState{std::move(a), shape};
}

CVec uniform_amps(int n) {
    return CVec::Constant(n, Cx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

double coherent_overlap_truncated(double x, double y, int n_max) {
    if (n_max < 0) throw ParameterError("qlinalg.coherent_overlap_truncated", "n_max must be >= 0");
    const double xy = x * y;
    const double pref = -(x * x + y * y) / 2.0;
    // sum_k (xy)^k / k! with the prefactor folded into each term in log space.
    double sum = 0.0;
    double log_fact = 0.0;
    for (int k = 0; k <= n_max; ++k) {
        if (k > 0) log_fact += std::log(static_cast<double>(k));
        if (xy == 0.0) {
            if (k == 0) sum += std::exp(pref);
            continue;
        }
        const double log_term = pref + k * std::log(std::abs(xy)) - log_fact;
        const double sign = (xy < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
        sum += sign * std::exp(log_term);
    }
    return sum;
}

DensityOp kernel_density(const DataSet& X) {
    const KernelSystem ks = kernel_matrix(X);
    CMat khat = (ks.W / static_cast<double>(X.n())).cast<Cx>();
    return DensityOp::checked(std::move(khat), "qlinalg.kernel_density");
}

namespace {

CMat slot_matrix(int slot) {
    CMat r = CMat::Zero(3, 3);
    switch (slot) {
        case 1: r(0, 1) = 1.0; break;
        case 2: r(1, 2) = 1.0; break;
        case 3: r(0, 2) = 1.0; break;
        default: throw ParameterError("qlinalg.embed_X", "slot must be 1, 2 or 3");
    }
    return r;
}

} // namespace

CMat embed_X(int slot, const CMat& a) {
    if (a.rows() != a.cols()) throw ParameterError("qlinalg.embed_X", "matrix must be square");
    const CMat r = slot_matrix(slot);
    return kron(r, a) + kron(r.adjoint().eval(), a.adjoint().eval());
}

UnitaryOp matexp(const CMat& h, double t) {
    if (!approx_hermitian(h, 1e-10))
        throw ParameterError("qlinalg.matexp", "generator must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("qlinalg.matexp", "eigendecomposition failed");
    CVec phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, es.eigenvalues()(k) * t);
    CMat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return UnitaryOp{std::move(u)};
}

CMat xi_operator(int n) {
    if (n < 2) throw ParameterError("qlinalg.xi_operator", "need n >= 2");
    CMat xi = CMat::Zero(static_cast<long>(n) * n, static_cast<long>(n) * n);
    for (int i = 0; i < n; ++i)
        xi(static_cast<long>(i) * n + 0, static_cast<long>(i) * n + i) = 1.0;
    return xi;
}

UnitaryOp qutrit_slot_permutation(int from_slot, int to_slot, int n) {
    const auto slot_pair = [](int slot) -> std::pair<int, int> {
        switch (slot) {
            case 1: return {0, 1};
            case 2: return {1, 2};
            case 3: return {0, 2};
            default: throw ParameterError("qlinalg.qutrit_slot_permutation", "slot must be 1, 2 or 3");
        }
    };
    const auto [fa, fb] = slot_pair(from_slot);
    const auto [ta, tb] = slot_pair(to_slot);
    // sigma(fa) = ta, sigma(fb) = tb, remaining element to the remaining one.
    std::vector<int> sigma(3, -1);
    sigma[fa] = ta;
    sigma[fb] = tb;
    const int f_rest = 3 - fa - fb;
    const int t_rest = 3 - ta - tb;
    sigma[f_rest] = t_rest;
    CMat p = CMat::Zero(3, 3);
    for (int k = 0; k < 3; ++k) p(sigma[k], k) = 1.0;
    return UnitaryOp{kron(p, CMat::Identity(n, n))};
}

} // namespace qdm
