#pragma once

#include "bineg/binegativity.hpp"
#include "bineg/normal_form.hpp"

namespace bineg {

struct WitnessResult {
    CVec phi;       // (tilde A (x) tilde B*)|phi+> / sqrt(L)
    double l = 1.0; // normalization L
};

WitnessResult nonpositivity_witness(const NormalForm& nf);

struct CMatrixResult {
    ComplexMatrix c;   // H1 H2, det 1
    ComplexMatrix h1;  // tilde A^dagger tilde A
    ComplexMatrix h2;  // tilde B^T tilde B*
    double tr_cc_star = 2.0;
};

CMatrixResult c_matrix(const NormalForm& nf);

// lambda0 = (1 - 2 p0) M / N; requires p0 < 1/2.
double lambda_bound(const NormalForm& nf, double m,
                    const Tolerances& tol = default_tolerances());

// X = P^{T_B} + lambda0 (|psi><psi|)^{T_B} from the two-qubit decomposition.
BipartiteOperator x_operator(const NegativeDecomposition& decomp, double lambda0);

struct XPrimeTerms {
    BipartiteOperator term1;  // 2 sum_{i<3} (p0 - p_{3-i}) |e_i><e_i|
    BipartiteOperator term2;  // (1-2p0)(C(x)I)[tilde C^dag tilde C (x) I + V](C^dag(x)I)
};

XPrimeTerms x_prime_terms(const NormalForm& nf);

// 2N (tilde A^dagger (x) tilde B^T) X (tilde A (x) tilde B*); equals
// term1 + term2 when X is built at lambda0.
BipartiteOperator x_prime_of(const NormalForm& nf, const BipartiteOperator& x);

double hyperplane_overlap(const CVec& psi, const CVec& phi);

struct BinegativityCertificate {
    CVec phi;
    double l = 1.0, m = 1.0, n = 1.0;  // normalizations L, M, N
    ComplexMatrix c;
    double tr_cc_star = 2.0;
    double lambda = 0.0;
    double lambda0 = 0.0;
    BipartiteOperator x;
    double weight_p = 0.0;  // 1 - lambda/lambda0, applied to P^{T_B}
    double weight_x = 0.0;  // lambda/lambda0
    double margin_pt = 0.0; // min eigenvalue of P^{T_B}
    double margin_x = 0.0;  // min eigenvalue of X
    double recombination_error = 0.0;
    double hyperplane = 0.0;
    std::array<double, 4> p{};
    bool regularized = false;  // P was lifted to rank 3 before the normal form
};

// Full pipeline for an entangled two-qubit state. Throws NotEntangled for
// PPT input and CertificateFailure when a theorem-guaranteed invariant
// breaks (expected never to fire for valid input).
BinegativityCertificate certify(const DensityMatrix& sigma,
                                const Tolerances& tol = default_tolerances());

} // namespace bineg
