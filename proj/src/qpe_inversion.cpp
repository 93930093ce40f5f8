#include "qdm/qpe_inversion.hpp"
#include "qdm/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <cmath>

namespace qdm {

void PhaseConfig::validate(const char* stage) const {
    if (n_b < 3) throw ParameterError(stage, "need at least 3 phase bits");
    if (n_b > 20) throw ParameterError(stage, "phase register too large to simulate");
    if (!(t > 0.0)) throw ParameterError(stage, "evolution time must be > 0");
    if (!(c_check > 0.0)) throw ParameterError(stage, "rotation constant must be > 0");
}

namespace {

void inverse_fourier_phase_axis(CMat& big) {
    const long m = big.rows();
    const double root = std::sqrt(static_cast<double>(m));
    Eigen::FFT<double> fft;
    std::vector<Cx> in(m), out(m);
    for (long j = 0; j < big.cols(); ++j) {
        for (long p = 0; p < m; ++p) in[p] = big(p, j);
        fft.fwd(out, in); // forward DFT = sum_p e^{-2 pi i q p / M}, the inverse QFT
        for (long q = 0; q < m; ++q) big(q, j) = out[q] / root;
    }
}

QuantumState state_from_phase_matrix(const CMat& big, const std::vector<int>& system_shape) {
    const long m = big.rows();
    const long dim = big.cols();
    CVec flat(m * dim);
    for (long p = 0; p < m; ++p) flat.segment(p * dim, dim) = big.row(p).transpose();
    std::vector<int> shape{static_cast<int>(m)};
    shape.insert(shape.end(), system_shape.begin(), system_shape.end());
    return QuantumState{std::move(flat), shape};
}

} // namespace

QuantumState qpe(const UnitaryOp& u, const QuantumState& psi, int n_b, bool spectral) {
    if (n_b < 1 || n_b > 20)
        throw ParameterError("qpe_inversion.qpe", "phase bits out of range");
    const long dim = psi.dim();
    if (u.dim() != dim)
        throw ParameterError("qpe_inversion.qpe", "unitary does not act on the state registers");
    const long m = 1L << n_b;

    CMat big(m, dim);
    const double inv_root_m = 1.0 / std::sqrt(static_cast<double>(m));

    if (!spectral) {
        for (long p = 0; p < m; ++p) big.row(p) = inv_root_m * psi.amps.transpose();
        CMat upow = u.mat;
        for (int k = 0; k < n_b; ++k) {
            std::vector<int> rows;
            rows.reserve(m / 2);
            for (long p = 0; p < m; ++p)
                if ((p >> k) & 1) rows.push_back(static_cast<int>(p));
            Eigen::Map<const Eigen::VectorXi> idx(rows.data(),
                                                  static_cast<long>(rows.size()));
            big(idx, Eigen::all) = (big(idx, Eigen::all) * upow.transpose()).eval();
            if (k + 1 < n_b) upow = (upow * upow).eval();
        }
    } else {
        // U is normal, so its Schur form is diagonal up to rounding; apply the
        // controlled powers as pure phases in the Schur basis.
        Eigen::ComplexSchur<CMat> schur(u.mat);
        if (schur.info() != Eigen::Success)
            throw NumericalError("qpe_inversion.qpe", "Schur decomposition failed");
        const CMat& q = schur.matrixU();
        Vec args(dim);
        for (long e = 0; e < dim; ++e) args(e) = std::arg(schur.matrixT()(e, e));
        const CVec coeff = q.adjoint() * psi.amps;
        for (long p = 0; p < m; ++p)
            for (long e = 0; e < dim; ++e)
                big(p, e) = inv_root_m * coeff(e) * std::polar(1.0, p * args(e));
        inverse_fourier_phase_axis(big);
        big = (big * q.transpose()).eval();
        return state_from_phase_matrix(big, psi.shape);
    }

    inverse_fourier_phase_axis(big);
    return state_from_phase_matrix(big, psi.shape);
}

double decode_degree(long bin, int n_b, double t, double scale) {
    const long m = 1L << n_b;
    const double frac = static_cast<double>(bin) / m;
    const double signed_frac = frac < 0.5 ? frac : frac - 1.0;
    return std::abs(signed_frac) * 2.0 * M_PI / (t * scale);
}

int aa_rounds_formula(double sin_theta) {
    if (!(sin_theta > 0.0))
        throw ExtractionError("qpe_inversion.aa_rounds", "no amplitude in the marked subspace");
    const double theta = std::asin(std::min(1.0, sin_theta));
    return static_cast<int>(std::ceil(M_PI / (4.0 * theta)));
}

int aa_rounds_to_exceed(double success_prob, double target) {
    if (success_prob >= target) return 0;
    return aa_rounds_formula(std::sqrt(std::max(success_prob, 0.0)));
}

QuantumState grover_iterate(const QuantumState& state, const QuantumState& reflect_about,
                            const std::function<bool(long)>& marked, int rounds) {
    if (state.dim() != reflect_about.dim())
        throw ParameterError("qpe_inversion.grover_iterate", "state dimensions differ");
    CVec v = state.amps;
    const CVec& r = reflect_about.amps;
    for (int round = 0; round < rounds; ++round) {
        for (long idx = 0; idx < v.size(); ++idx)
            if (marked(idx)) v(idx) = -v(idx);
        const Cx overlap = r.dot(v);
        v = (2.0 * overlap * r - v).eval();
    }
    return QuantumState{std::move(v), state.shape};
}

double marked_probability(const QuantumState& psi, const std::function<bool(long)>& marked) {
    double acc = 0.0;
    for (long idx = 0; idx < psi.dim(); ++idx)
        if (marked(idx)) acc += std::norm(psi.amps(idx));
    return acc;
}

QuantumState degree_rotation_joint(const QuantumState& post_qpe, const PhaseConfig& pc,
                                   double scale, double t) {
    const long m = 1L << pc.n_b;
    const long rest = post_qpe.dim() / m;
    CVec joint(post_qpe.dim() * 2);
    for (long p = 0; p < m; ++p) {
        const double d = decode_degree(p, pc.n_b, t, scale);
        // Degrees below the rotation constant cannot be inverted; their mass
        // goes to the ancilla-0 branch (callers guard it beforehand).
        const double amp1 = d >= pc.c_check ? std::sqrt(std::min(1.0, pc.c_check / d)) : 0.0;
        const double amp0 = std::sqrt(std::max(0.0, 1.0 - amp1 * amp1));
        for (long r = 0; r < rest; ++r) {
            const Cx a = post_qpe.amps(p * rest + r);
            joint(2 * (p * rest + r) + 0) = amp0 * a;
            joint(2 * (p * rest + r) + 1) = amp1 * a;
        }
    }
    std::vector<int> shape = post_qpe.shape;
    shape.push_back(2);
    return QuantumState{std::move(joint), shape};
}

InversionResult invert_degree(const UDOperator& ud, const PhaseConfig& pc) {
    const char* stage = "qpe_inversion.invert_degree";
    pc.validate(stage);
    const int n = ud.n;
    const double dmax = ud.degrees.maxCoeff();
    if (dmax * ud.t * ud.scale >= M_PI)
        throw ParameterError(stage, "evolution time wraps the largest degree phase");
    if (pc.c_check > ud.degrees.minCoeff() + 1e-12)
        throw ParameterError(stage, "rotation constant exceeds the smallest degree");

    // |+> qutrit, uniform label, |0> trailing
    CVec qutrit_plus = CVec::Zero(3);
    qutrit_plus(0) = 1.0 / std::sqrt(2.0);
    qutrit_plus(2) = 1.0 / std::sqrt(2.0);
    CVec trailing = CVec::Zero(n);
    trailing(0) = 1.0;
    const CVec amps = kron_vec(qutrit_plus, kron_vec(uniform_amps(n), trailing));
    const QuantumState psi0 = QuantumState::checked(amps, {3, n, n}, stage);

    const QuantumState post = qpe(ud.mat, psi0, pc.n_b, pc.spectral_qpe);
    const long m = 1L << pc.n_b;

    const Vec phase_marginal = post.register_marginal(0);
    double dead_mass = 0.0;
    for (long p = 0; p < m; ++p)
        if (decode_degree(p, pc.n_b, ud.t, ud.scale) < pc.c_check) dead_mass += phase_marginal(p);
    if (dead_mass > 1e-9)
        throw ResolutionError(stage,
                              "unresolvable phase mass " + std::to_string(dead_mass) +
                                  " below the rotation constant",
                              pc.n_b + 2);

    const QuantumState joint = degree_rotation_joint(post, pc, ud.scale, ud.t);
    const int ancilla_reg = static_cast<int>(joint.shape.size()) - 1;
    const auto marked = [](long idx) { return idx % 2 == 1; }; // ancilla is the fastest index

    InversionResult res;
    res.success_prob = marked_probability(joint, marked);
    if (!(res.success_prob > 0.0))
        throw ExtractionError(stage, "post-selection has zero success probability");
    res.aa_rounds = aa_rounds_to_exceed(res.success_prob, 0.9);

    const QuantumState amplified = grover_iterate(joint, joint, marked, res.aa_rounds);
    res.post_aa_success = marked_probability(amplified, marked);

    auto [selected, p1] = amplified.project(ancilla_reg, 1);
    (void)p1;

    // registers of `selected`: [phase, qutrit, label, trailing]
    CMat rho = selected.reduced_density(2);
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    res.rho_inv = DensityOp::checked(rho, stage);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) res.offdiag_mass += std::abs(rho(i, j));

    // decoded degree per label: peak phase bin conditioned on the label
    res.degrees_est = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        auto [given_label, pl] = post.project(2, i);
        if (pl <= 0.0) continue;
        const Vec marg = given_label.register_marginal(0);
        long best = 0;
        for (long p = 1; p < m; ++p)
            if (marg(p) > marg(best)) best = p;
        res.degrees_est(i) = decode_degree(best, pc.n_b, ud.t, ud.scale);
    }
    double inv_sum = 0.0;
    for (int i = 0; i < n; ++i)
        if (res.degrees_est(i) > 0.0) inv_sum += 1.0 / res.degrees_est(i);
    res.c_tilde_est = inv_sum > 0.0 ? 1.0 / inv_sum : 0.0;

    res.kappa_d = ud.degrees.maxCoeff() / ud.degrees.minCoeff();
    return res;
}

double condition_number(const KernelSystem& ks) {
    return ks.D.maxCoeff() / ks.D.minCoeff();
}

} // namespace qdm
