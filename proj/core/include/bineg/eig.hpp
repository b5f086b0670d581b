#pragma once

#include "bineg/matrix.hpp"
#include "bineg/tolerances.hpp"

#include <vector>

namespace bineg {

// Eigenvalues ascending; eigenvectors are the orthonormal columns of
// `vectors`, phase-fixed so each column's largest-magnitude component is
// real nonnegative (ties broken by lowest index).
struct EigenSystem {
    std::vector<double> values;
    ComplexMatrix vectors;

    ComplexMatrix reconstruct() const;
    double min_value() const;
    double max_value() const;
};

// Cyclic complex Jacobi. Deterministic for identical input: fixed sweep
// order, convergence when the off-diagonal Frobenius mass drops below
// jacobi_offdiag_rel relative to the total.
EigenSystem hermitian_eig(const ComplexMatrix& h,
                          const Tolerances& tol = default_tolerances());

// Count of eigenvalues above threshold_rel * max eigenvalue magnitude.
int numerical_rank(const EigenSystem& es, double threshold_rel);

} // namespace bineg
