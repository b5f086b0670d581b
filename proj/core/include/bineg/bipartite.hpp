#pragma once

#include "bineg/eig.hpp"
#include "bineg/matrix.hpp"
#include "bineg/tolerances.hpp"

namespace bineg {

enum class Side { A, B };

// Hermitian operator on C^{dimA} (x) C^{dimB}, Alice-major index a*dimB + b.
struct BipartiteOperator {
    int dim_a = 0;
    int dim_b = 0;
    ComplexMatrix mat;

    BipartiteOperator() = default;
    BipartiteOperator(int da, int db) : dim_a(da), dim_b(db), mat(da * db, da * db) {}
    BipartiteOperator(int da, int db, ComplexMatrix m) : dim_a(da), dim_b(db), mat(std::move(m)) {}

    int dim() const { return dim_a * dim_b; }
};

// Throws NonHermitianInput if the matrix deviates from Hermiticity by more
// than tol.hermiticity relative to its max-norm scale.
void require_hermitian(const BipartiteOperator& op,
                       const Tolerances& tol = default_tolerances());

// Transpose the blocks of one party. Exact entry permutation, involutive.
BipartiteOperator partial_transpose(const BipartiteOperator& m, Side side = Side::B);

// |H| = sum |lambda_i| v_i v_i^dagger.
BipartiteOperator operator_abs(const BipartiteOperator& h,
                               const Tolerances& tol = default_tolerances());

double trace_norm(const BipartiteOperator& h,
                  const Tolerances& tol = default_tolerances());

// Swap (flip) operator V|ab> = |ba> on d (x) d.
BipartiteOperator flip_operator(int d);

BipartiteOperator operator+(const BipartiteOperator& a, const BipartiteOperator& b);
BipartiteOperator operator-(const BipartiteOperator& a, const BipartiteOperator& b);
BipartiteOperator operator*(double s, const BipartiteOperator& a);

// Tr_B of a bipartite operator (2x2 result for two qubits, dimA x dimA in general).
ComplexMatrix partial_trace_b(const BipartiteOperator& op);
ComplexMatrix partial_trace_a(const BipartiteOperator& op);

// Hilbert-Schmidt inner product Tr[a^dagger b] (real part for Hermitian pairs).
double hs_inner(const BipartiteOperator& a, const BipartiteOperator& b);

} // namespace bineg
