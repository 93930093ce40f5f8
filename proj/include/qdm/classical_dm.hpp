#pragma once

#include "qdm/dataset.hpp"

namespace qdm {

// Gaussian kernel system at unit bandwidth (fold sigma in beforehand with
// scale_by_bandwidth). W is the kernel matrix, D its row sums, P = D^-1 W the
// transition matrix and S = D^-1/2 W D^-1/2 its symmetric similar form.
struct KernelSystem {
    Mat W;
    Vec D;
    Mat P;
    Mat S;
    int n() const { return static_cast<int>(W.rows()); }
    bool has_transition() const { return P.rows() == W.rows(); }
};

// Eigenpairs of P obtained through S. Conventions:
//   - psis: orthonormal eigenvectors of S, sign fixed so the largest-|entry|
//     component is positive, sorted by descending eigenvalue.
//   - right_vecs v_k = sqrt(sum d) D^-1/2 psi_k  (v_0 = all-ones)
//   - left_vecs  u_k = D^1/2 psi_k / sqrt(sum d) (u_0 = stationary, sums to 1)
// With these scales u_i^T v_j = delta_ij and the diffusion-distance /
// embedding-distance identity holds with m = N-1 bases.
struct EigenSystem {
    Vec lambdas;
    Mat right_vecs;
    Mat left_vecs;
    Mat psis;
    Vec degrees;
    double degree_sum = 0.0;
    int n() const { return static_cast<int>(lambdas.size()); }
};

// Coordinates lambda_k^t v_k for k = 1..m, one point per row.
struct DiffusionEmbedding {
    int t_steps = 0;
    int m = 0;
    Mat coords;
};

// W and D only; P and S are filled by transition_matrix.
KernelSystem kernel_matrix(const DataSet& X);

KernelSystem transition_matrix(KernelSystem ks);

EigenSystem eigendecompose(const KernelSystem& ks);

DiffusionEmbedding diffusion_map(const EigenSystem& es, int t_steps, int m);

// t-step diffusion distance between points i and j, computed from P^t by
// repeated multiplication (independent of the eigensystem it is checked
// against). The stationary weight comes from the degree vector.
double diffusion_distance(const KernelSystem& ks, const EigenSystem& es,
                          int i, int j, int t);

// Max over pairs of |Dist_t(i,j)^2 - ||phi_t(i) - phi_t(j)||^2| at m = N-1.
double verify_embedding_identity(const KernelSystem& ks, const EigenSystem& es, int t);

} // namespace qdm
