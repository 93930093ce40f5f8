#pragma once

#include "qdm/classical_dm.hpp"
#include "qdm/qlinalg.hpp"

#include <string>
#include <vector>

namespace qdm {

struct QmatConfig {
    double t = 1.0; // evolution time
    int m = 16;     // step-count parameter; step size is t/m

    // round(m^2 / (2t)), at least 1
    long n_prime() const;
    void validate(const char* stage) const;
};

// One multiplication's bookkeeping. `deviation` is the spectral-norm distance
// of the produced unitary from the exact exponential; `budget` the pinned
// error model (t^3 + t^2)/m^2 (the t^2 term covers the integer rounding of
// the repeat count).
struct QmatStageRecord {
    std::string stage;
    double t = 0.0;
    int m = 0;
    long n_prime = 0;
    double deviation = 0.0;
    double budget = 0.0;
};

double qmat_error_budget(double t, int m);

// 8-factor word X Y X^-1 Y^-1 X^-1 Y^-1 X Y; inverses are adjoints.
UnitaryOp commutator_word(const UnitaryOp& expX, const UnitaryOp& expY);

// diag(sqrt(-i) I_n, I_n, sqrt(i) I_n); carries the simulated commutator onto
// the product's X_3 slot.
UnitaryOp qmat_basis_rotation(int n);

// U [word]^n' U^dag. With steps exp(i X_1(A1) t/m) and exp(i X_2(A2) t/m)
// this approximates exp(i X_3(A1 A2) t) with spectral-norm error O(t^3/m^2).
UnitaryOp qmat_multiply(const UnitaryOp& expA1_step, const UnitaryOp& expA2_step,
                        const QmatConfig& cfg, const UnitaryOp& basis_rotation);

// Controlled degree evolution on registers [3, N, N]: the last-register |0>
// slice approximates exp(i X_3(D t / N)) and the complement acts as identity.
struct UDOperator {
    UnitaryOp mat;
    double t = 0.0;
    int n = 0;
    double scale = 0.0; // |0>-slice generator is scale * D * t; scale = 1/N
    bool exact = false;
    Vec degrees; // classical oracle side channel for downstream comparisons
    std::vector<QmatStageRecord> stages;

    double total_deviation() const;
    double total_budget() const;
};

// Three-multiplication pipeline: kernel-density times uniform-density, tensor
// with identity, then conjugation by the xi isometry through two further
// multiplications. Cascaded stages consume the previous stage's product
// formula re-run at step-sized evolution times, so approximation errors
// propagate the way the construction applies them. `exact` swaps every
// product formula for the exact exponential.
UDOperator build_U_D(const DataSet& X, const QmatConfig& cfg, bool exact = false,
                     int cap = 16);

// (I (x) <0|) U_D (I (x) |0>) on the trailing register: the 3N x 3N block.
CMat ud_zero_slice(const UDOperator& ud);

// Unitary matrix power by binary exponentiation.
CMat unitary_power(const CMat& u, long exponent);

} // namespace qdm
