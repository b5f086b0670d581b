#pragma once

namespace bineg {

// Every comparison in the library goes through one of these knobs.
// Comparisons are relative to the input's max-norm scale except the PSD
// slack, which is absolute after unit-trace normalization.
struct Tolerances {
    double hermiticity = 1e-12;      // max-norm Hermiticity slack
    double psd_slack = 1e-10;        // absolute min-eigenvalue slack
    double eig_reconstruct = 1e-11;  // eigendecomposition residual
    double zero_band = 1e-12;        // spectral split band around zero
    double rank_threshold = 1e-10;   // relative to largest eigenvalue
    double filter_convergence = 1e-13;
    double filter_stall = 1e-14;     // purity decrease per 50 iterations
    long max_filter_iterations = 100000;
    double nf_residual = 1e-9;       // normal-form reconstruction
    double det_one = 1e-10;
    double p3_zero = 1e-9;           // rank-3 normal form: p3 budget
    double cert_recombination = 1e-9;
    double binegative_threshold = 1e-10;  // explorer classification knob
    double jacobi_offdiag_rel = 1e-26;    // off-diagonal Frobenius mass, relative
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

} // namespace bineg
