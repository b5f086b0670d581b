#pragma once

#include "bineg/bipartite.hpp"
#include "bineg/matrix.hpp"
#include "bineg/tolerances.hpp"

#include <array>

namespace bineg {

enum class NormalFormClass { BellDiagonal, SigmaC };

// W = (1/N) sum_i p_i (A (x) B) |e_i><e_i| (A^dagger (x) B^dagger) for the
// BellDiagonal class, with det A = det B = 1 and p non-increasing. For the
// SigmaC class, W = (1/N) (A (x) B) sigma_c(a,b,c,d) (A^dagger (x) B^dagger).
struct NormalForm {
    ComplexMatrix a_filter;  // A
    ComplexMatrix b_filter;  // B
    std::array<double, 4> p{};
    double normalization = 1.0;  // N
    NormalFormClass cls = NormalFormClass::BellDiagonal;
    std::array<double, 4> sigma_c_params{};  // a, b, c, d (SigmaC class only)
    double residual = 0.0;
};

// Iterative local filtering toward maximally mixed marginals, followed by a
// Bell-diagonalization of the Pauli correlation block. A stalled iteration
// with non-maximally-mixed marginals is classified as the sigma_c family
// (returned, not thrown); iteration overflow throws NonConvergent.
NormalForm filter_normal_form(const BipartiteOperator& w,
                              const Tolerances& tol = default_tolerances());

// (1/N) sum p_i (A(x)B)|e_i><e_i|(A(x)B)^dagger, or the sigma_c analogue.
BipartiteOperator reconstruct(const NormalForm& nf);

struct KernelState {
    CVec psi;       // unit kernel vector (tilde A (x) tilde B)|phi+> / sqrt(M)
    double m = 1.0; // normalization M
};

// Requires the BellDiagonal class with p3 ~ 0 (rank-3 source).
KernelState kernel_state(const NormalForm& nf,
                         const Tolerances& tol = default_tolerances());

// Lift a rank-deficient positive part to rank 3 by adding eps on kernel
// directions orthogonal to psi; eps = 1e-8 * trace(P).
BipartiteOperator rank3_regularize(const BipartiteOperator& p, const CVec& psi,
                                   const Tolerances& tol = default_tolerances());

// (1/2N) sum_i (1 - 2 p_{3-i}) (A (x) B*) |e_i><e_i| (A^dagger (x) B^T).
BipartiteOperator pt_in_normal_form(const NormalForm& nf);

// ---- small helpers shared with tests ----

// Signed SVD: t = u diag(s) v^T with det(u) = det(v) = +1; s entries may be
// negative, ordered by decreasing magnitude.
struct SignedSvd3 {
    std::array<std::array<double, 3>, 3> u, v;
    std::array<double, 3> s;
};
SignedSvd3 signed_svd3(const std::array<std::array<double, 3>, 3>& t);

// SU(2) element whose adjoint rotation matrix R_ij = Tr[sigma_i U sigma_j U^dagger]/2
// equals the given SO(3) matrix.
ComplexMatrix su2_from_so3(const std::array<std::array<double, 3>, 3>& r);

// Pauli correlation block T_jk = Re Tr[rho sigma_j (x) sigma_k], j,k in {x,y,z}.
std::array<std::array<double, 3>, 3> pauli_correlation(const BipartiteOperator& rho);

} // namespace bineg
