#pragma once

#include "qdm/qmat.hpp"

#include <functional>

namespace qdm {

struct PhaseConfig {
    int n_b = 8;            // phase-register bits
    double t = 1.5707963267948966; // degree-evolution time; pi/2 keeps d=N on-grid
    double c_check = 1.0;   // rotation constant, must not exceed d_min
    bool spectral_qpe = false; // diagonal fast path, agrees with the literal one
    void validate(const char* stage) const;
};

struct InversionResult {
    DensityOp rho_inv;
    double success_prob = 0.0;  // pre-amplification
    int aa_rounds = 0;
    double kappa_d = 1.0;       // from the classical oracle
    Vec degrees_est;            // decoded degree per label (peak phase bin)
    double c_tilde_est = 0.0;   // (sum 1/d~_i)^-1
    double offdiag_mass = 0.0;
    double post_aa_success = 0.0;
};

// Textbook phase estimation as explicit matrix-vector products: Hadamards on
// a fresh n_b-bit register, controlled U^(2^k), inverse Fourier transform.
// Returns the joint state with the phase register prepended. The spectral
// path diagonalizes U once and applies the controlled powers as phases; both
// paths agree to rounding.
QuantumState qpe(const UnitaryOp& u, const QuantumState& psi, int n_b,
                 bool spectral = false);

// Maps a phase bin to the degree it encodes: |two's-complement fraction| *
// 2 pi / (t * scale).
double decode_degree(long bin, int n_b, double t, double scale);

// QPE on |+> (x) |1^> (x) |0>, conditional 1/sqrt(d) rotation on a fresh
// ancilla, post-selection of "1", explicit amplitude amplification, partial
// trace down to the label register.
InversionResult invert_degree(const UDOperator& ud, const PhaseConfig& pc);

double condition_number(const KernelSystem& ks);

// ceil(pi / (4 asin(sin_theta)))
int aa_rounds_formula(double sin_theta);
// rounds needed to exceed `target` success; 0 when already above it
int aa_rounds_to_exceed(double success_prob, double target = 0.9);

// `rounds` applications of Q = (2|r><r| - I)(I - 2 P_marked) on the state.
QuantumState grover_iterate(const QuantumState& state, const QuantumState& reflect_about,
                            const std::function<bool(long)>& marked, int rounds);

double marked_probability(const QuantumState& psi, const std::function<bool(long)>& marked);

// Joint state after the conditional rotation, ancilla appended as the last
// register. Exposed for the amplification invariants.
QuantumState degree_rotation_joint(const QuantumState& post_qpe, const PhaseConfig& pc,
                                   double scale, double t);

} // namespace qdm
