#include "qdm/qmat.hpp"
#include "qdm/errors.hpp"

#include <cmath>
#include <sstream>

namespace qdm {

long QmatConfig::n_prime() const {
    return std::max(1L, std::lround(static_cast<double>(m) * m / (2.0 * t)));
}

void QmatConfig::validate(const char* stage) const {
    if (!(t > 0.0)) throw ParameterError(stage, "evolution time must be > 0");
    if (m < 2) throw ParameterError(stage, "step count m must be >= 2");
}

double qmat_error_budget(double t, int m) {
    return (t * t * t + t * t) / (static_cast<double>(m) * m);
}

UnitaryOp commutator_word(const UnitaryOp& expX, const UnitaryOp& expY) {
    if (expX.dim() != expY.dim())
        throw ParameterError("qmat.commutator_word", "operand dimensions differ");
    const CMat& x = expX.mat;
    const CMat& y = expY.mat;
    const CMat xi = x.adjoint();
    const CMat yi = y.adjoint();
    return UnitaryOp{x * y * xi * yi * xi * yi * x * y};
}

UnitaryOp qmat_basis_rotation(int n) {
    const Cx root_minus_i = std::polar(1.0, -M_PI / 4.0);
    const Cx root_plus_i = std::polar(1.0, M_PI / 4.0);
    CVec diag(3L * n);
    diag.segment(0, n).setConstant(root_minus_i);
    diag.segment(n, n).setConstant(Cx(1.0, 0.0));
    diag.segment(2L * n, n).setConstant(root_plus_i);
    return UnitaryOp{CMat(diag.asDiagonal())};
}

CMat unitary_power(const CMat& u, long exponent) {
    CMat result = CMat::Identity(u.rows(), u.cols());
    CMat base = u;
    long e = exponent;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

UnitaryOp qmat_multiply(const UnitaryOp& expA1_step, const UnitaryOp& expA2_step,
                        const QmatConfig& cfg, const UnitaryOp& basis_rotation) {
    cfg.validate("qmat.qmat_multiply");
    if (expA1_step.dim() != expA2_step.dim() || expA1_step.dim() != basis_rotation.dim())
        throw ParameterError("qmat.qmat_multiply", "operand dimensions differ");
    const UnitaryOp word = commutator_word(expA1_step, expA2_step);
    CMat powered = unitary_power(word.mat, cfg.n_prime());
    return UnitaryOp{basis_rotation.mat * powered * basis_rotation.mat.adjoint()};
}

double UDOperator::total_deviation() const {
    double acc = 0.0;
    for (const auto& s : stages) acc += s.deviation;
    return acc;
}

double UDOperator::total_budget() const {
    double acc = 0.0;
    for (const auto& s : stages) acc += s.budget;
    return acc;
}

UDOperator build_U_D(const DataSet& X, const QmatConfig& cfg, bool exact, int cap) {
    const int n = X.n();
    if (n > cap)
        throw CapacityError("qmat.build_U_D", "N=" + std::to_string(n) +
                                                  " exceeds simulator cap " + std::to_string(cap));
    cfg.validate("qmat.build_U_D");

    const KernelSystem ks = kernel_matrix(X);
    const double t = cfg.t;
    const int m = cfg.m;
    const long nsq = static_cast<long>(n) * n;

    const CMat khat = (ks.W / n).cast<Cx>();
    const CMat ihat = CMat::Constant(n, n, Cx(1.0 / n, 0.0));
    const CMat xi = xi_operator(n);
    const CMat eye_n = CMat::Identity(n, n);

    const UnitaryOp rot_n = qmat_basis_rotation(n);
    const UnitaryOp rot_nsq = qmat_basis_rotation(static_cast<int>(nsq));
    const UnitaryOp perm_3_to_2 = qutrit_slot_permutation(3, 2, static_cast<int>(nsq));
    const UnitaryOp perm_3_to_1 = qutrit_slot_permutation(3, 1, static_cast<int>(nsq));

    // Physical generators per stage (evolution times folded in):
    //   M1 = (K 1 / N) t on N,             stage 1 output ~ exp(i X_3(M1))
    //   M2 = M1 (x) I on N^2
    //   M3 = Xi M2,                        stage 2 output ~ exp(i X_3(M3))
    //   M4 = M3 Xi^dag = (D t/N)(x)|0><0|, stage 3 output = U_D
    const double tau1 = n * t;
    const CMat m1 = (ks.W * Mat::Ones(n, n) / n).cast<Cx>() * t;
    const CMat m2 = kron(m1, eye_n);
    const CMat m3 = xi * m2;
    const CMat m4 = m3 * xi.adjoint();

    // Stage 1 output at a given evolution time; generator khat * ihat.
    const auto stage1_at = [&](double tau) -> UnitaryOp {
        if (exact) return matexp(embed_X(3, khat * ihat), tau);
        QmatConfig c{tau, m};
        const UnitaryOp s1 = matexp(embed_X(1, khat), tau / m);
        const UnitaryOp s2 = matexp(embed_X(2, ihat), tau / m);
        return qmat_multiply(s1, s2, c, rot_n);
    };

    // Stage 2 output at a given evolution time; generator Xi * M2. The X_2
    // step re-uses stage 1 at a step-sized time, tensored and slot-permuted.
    const auto stage2_at = [&](double tau) -> UnitaryOp {
        if (exact) return matexp(embed_X(3, m3), tau);
        QmatConfig c{tau, m};
        const UnitaryOp s_xi = matexp(embed_X(1, xi), tau / m);
        const UnitaryOp w1 = stage1_at(tau1 * tau / m);
        const CMat w1_ext = kron(w1.mat, eye_n);
        const UnitaryOp s_m2{perm_3_to_2.mat * w1_ext * perm_3_to_2.mat.adjoint()};
        return qmat_multiply(s_xi, s_m2, c, rot_nsq);
    };

    UDOperator ud;
    ud.t = t;
    ud.n = n;
    ud.scale = 1.0 / n;
    ud.exact = exact;
    ud.degrees = ks.D;

    const auto record = [&](const char* name, double tau, const UnitaryOp& got,
                            const CMat& exact_gen) {
        const UnitaryOp oracle = matexp(embed_X(3, exact_gen), 1.0);
        QmatStageRecord rec;
        rec.stage = name;
        rec.t = tau;
        rec.m = m;
        rec.n_prime = QmatConfig{tau, m}.n_prime();
        rec.deviation = spectral_norm(got.mat - oracle.mat);
        rec.budget = exact ? 0.0 : qmat_error_budget(tau, m);
        ud.stages.push_back(rec);
    };

    const UnitaryOp v1 = stage1_at(tau1);
    record("khat_times_ihat", tau1, v1, m1);

    const UnitaryOp v2 = stage2_at(1.0);
    record("xi_times_product", 1.0, v2, m3);

    UnitaryOp v3{CMat{}};
    if (exact) {
        v3 = matexp(embed_X(3, m4), 1.0);
    } else {
        const UnitaryOp w2 = stage2_at(1.0 / m);
        const UnitaryOp s_m3{perm_3_to_1.mat * w2.mat * perm_3_to_1.mat.adjoint()};
        const UnitaryOp s_xid = matexp(embed_X(2, xi.adjoint().eval()), 1.0 / m);
        v3 = qmat_multiply(s_m3, s_xid, QmatConfig{1.0, m}, rot_nsq);
    }
    record("product_times_xi_dag", 1.0, v3, m4);

    const double budget = ud.total_budget();
    const double deviation = ud.stages.back().deviation;
    if (!exact && budget > 0.0 && deviation > 5.0 * budget) {
        std::ostringstream os;
        os << "degree-evolution deviation " << deviation << " exceeds 5x budget " << budget
           << "; stages:";
        for (const auto& s : ud.stages)
            os << " [" << s.stage << " t=" << s.t << " m=" << s.m << " dev=" << s.deviation
               << " budget=" << s.budget << "]";
        throw AccuracyError("qmat.build_U_D", os.str());
    }

    ud.mat = std::move(v3);
    return ud;
}

CMat ud_zero_slice(const UDOperator& ud) {
    const int n = ud.n;
    const long dim = 3L * n;
    CMat slice(dim, dim);
    for (long r = 0; r < dim; ++r) {
        const long q = r / n, i = r % n;
        for (long c = 0; c < dim; ++c) {
            const long qp = c / n, ip = c % n;
            slice(r, c) = ud.mat.mat(q * n * n + i * n + 0, qp * n * n + ip * n + 0);
        }
    }
    return slice;
}

} // namespace qdm
