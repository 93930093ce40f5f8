#pragma once

#include "qdm/dataset.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qdm {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Small matrix utilities
// ---------------------------------------------------------------------------

CMat kron(const CMat& a, const CMat& b);
CVec kron_vec(const CVec& a, const CVec& b);

double max_abs(const CMat& a);
double spectral_norm(const CMat& a); // largest singular value
bool approx_hermitian(const CMat& a, double tol = 1e-10);
bool approx_unitary(const CMat& a, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Checked wire types
// ---------------------------------------------------------------------------

// Hermitian, unit trace, PSD up to -1e-10.
struct DensityOp {
    CMat mat;
    int dim() const { return static_cast<int>(mat.rows()); }
    static DensityOp checked(CMat m, const char* stage);
};

struct UnitaryOp {
    CMat mat;
    int dim() const { return static_cast<int>(mat.rows()); }
    UnitaryOp adjoint() const { return UnitaryOp{mat.adjoint()}; }
    static UnitaryOp checked(CMat m, const char* stage);
};

// Dense state over an ordered list of subsystems, leftmost slowest-varying.
struct QuantumState {
    CVec amps;
    std::vector<int> shape;

    int dim() const { return static_cast<int>(amps.size()); }
    int num_registers() const { return static_cast<int>(shape.size()); }
    static QuantumState checked(CVec a, std::vector<int> shape, const char* stage);

    // Probability distribution of one register, all others traced out.
    Vec register_marginal(int reg) const;
    // Collapse one register to a basis outcome; returns the renormalized state
    // (outcome register removed) and the outcome probability.
    std::pair<QuantumState, double> project(int reg, int outcome) const;
    // Reduced density operator of a single kept register.
    CMat reduced_density(int keep_reg) const;
};

// Basis state |index> over the composite `shape`.
QuantumState basis_state(const std::vector<int>& shape, long index);
CVec uniform_amps(int n);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Fock-truncated overlap of two single-mode coherent states:
//   exp(-(x^2+y^2)/2) * sum_{k<=n_max} (xy)^k / k!
// Converges to exp(-(x-y)^2/2) as n_max grows. Terms are accumulated in log
// space when |xy| is large enough to overflow a naive power/factorial.
double coherent_overlap_truncated(double x, double y, int n_max);

// Kernel matrix divided by N; unit trace by construction.
DensityOp kernel_density(const DataSet& X);

// Qutrit-block Hermitian embedding R_slot (x) A + R_slot^dag (x) A^dag with
// R_1 = |0><1|, R_2 = |1><2|, R_3 = |0><2|. Output is 3N x 3N.
CMat embed_X(int slot, const CMat& a);

// exp(i H t) for Hermitian H, via eigendecomposition; exactly unitary up to
// rounding.
UnitaryOp matexp(const CMat& h, double t);

// Partial isometry sum_i |i><i| (x) |0><i| on an N (x) N register pair. It
// reduces elementwise products to ordinary ones:
//   Xi (A (x) B) Xi^dag = (A .* B) (x) |0><0|
CMat xi_operator(int n);

// Permutation of the qutrit basis that carries the X_from embedding slot onto
// the X_to slot: (P (x) I) X_from(A) (P (x) I)^dag = X_to(A).
UnitaryOp qutrit_slot_permutation(int from_slot, int to_slot, int n);

} // namespace qdm
