#pragma once

#include "bineg/bipartite.hpp"
#include "bineg/states.hpp"

#include <vector>

namespace bineg {

struct NegativeTerm {
    double lambda = 0.0;  // positive weight
    CVec psi;             // unit eigenvector
};

// sigma^{T_B} = P - sum_i lambda_i |psi_i><psi_i|, P >= 0, P psi_i = 0.
struct NegativeDecomposition {
    BipartiteOperator positive_part;  // P, unnormalized
    std::vector<NegativeTerm> negatives;
    std::vector<double> pt_spectrum;  // full spectrum of sigma^{T_B}, ascending
};

// Spectral split of sigma^{T_B} at zero; eigenvalues inside the +-zero_band
// band are assigned to P as zeros. A 2x2-party input with two or more
// eigenvalues below -psd_slack signals numerical corruption.
NegativeDecomposition negative_decomposition(const DensityMatrix& sigma,
                                             const Tolerances& tol = default_tolerances());

// |sigma^{T_B}|^{T_B}.
BipartiteOperator binegativity(const DensityMatrix& sigma,
                               const Tolerances& tol = default_tolerances());

struct EntanglementSummary {
    double negativity = 0.0;      // sum of |negative eigenvalues| of sigma^{T_B}
    double log_negativity = 0.0;  // log2 of the trace norm
    bool is_ppt = true;
    double lambda = 0.0;          // the single negative weight in two qubits
    double bineg_min_eig = 0.0;
};

EntanglementSummary summary(const DensityMatrix& sigma,
                            const Tolerances& tol = default_tolerances());

struct SeparableApproximation {
    DensityMatrix approx;         // P^{T_B} / (1 + lambda)
    BipartiteOperator witness;    // (|psi><psi|)^{T_B}, unscaled
    double lambda = 0.0;
};

// Two-qubit entangled input only; throws NotEntangled for PPT states.
SeparableApproximation separable_approximation(const DensityMatrix& sigma,
                                               const Tolerances& tol = default_tolerances());

struct TheoremFlags {
    bool entangled = false;
    double t1_margin = 0.0;  // min eigenvalue of P^{T_B}
    bool t1_pass = false;
    bool c1_applicable = false;
    int c1_rank = 0;
    bool c1_pass = false;
    double t2_margin = 0.0;  // min eigenvalue of the binegativity
    bool t2_pass = false;
    std::vector<double> p_spectrum;  // raw spectrum of P, for re-thresholding
};

TheoremFlags check_theorems(const DensityMatrix& sigma,
                            const Tolerances& tol = default_tolerances());

} // namespace bineg
