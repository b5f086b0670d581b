#include "bineg/binegativity.hpp"

#include "bineg/errors.hpp"

#include <cmath>

namespace bineg {

NegativeDecomposition negative_decomposition(const DensityMatrix& sigma, const Tolerances& tol) {
    const BipartiteOperator pt = partial_transpose(sigma.op, Side::B);
    const EigenSystem es = hermitian_eig(pt.mat, tol);
    const std::size_t n = pt.mat.rows();

    NegativeDecomposition out;
    out.positive_part = BipartiteOperator(sigma.op.dim_a, sigma.op.dim_b);
    out.pt_spectrum = es.values;

    int strongly_negative = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = es.values[k];
        if (v < -tol.zero_band) {
            if (v < -tol.psd_slack) ++strongly_negative;
            NegativeTerm term;
            term.lambda = -v;
            term.psi.resize(n);
            for (std::size_t i = 0; i < n; ++i) term.psi[i] = es.vectors(i, k);
            out.negatives.push_back(std::move(term));
        } else if (v > tol.zero_band) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out.positive_part.mat(i, j) += v * es.vectors(i, k) * std::conj(es.vectors(j, k));
        }
        // Eigenvalues inside the band contribute zero to P.
    }

    if (sigma.op.dim_a == 2 && sigma.op.dim_b == 2 && strongly_negative >= 2)
        throw DegenerateNegativeSpectrum(
            "negative_decomposition: two-qubit partial transpose has >= 2 negative eigenvalues");
    return out;
}

BipartiteOperator binegativity(const DensityMatrix& sigma, const Tolerances& tol) {
    const BipartiteOperator pt = partial_transpose(sigma.op, Side::B);
    return partial_transpose(operator_abs(pt, tol), Side::B);
}

EntanglementSummary summary(const DensityMatrix& sigma, const Tolerances& tol) {
    const NegativeDecomposition dec = negative_decomposition(sigma, tol);

    EntanglementSummary s;
    double tn = 0.0;
    for (double v : dec.pt_spectrum) tn += std::abs(v);
    for (const NegativeTerm& t : dec.negatives) s.negativity += t.lambda;
    s.log_negativity = std::log2(tn);
    s.is_ppt = s.negativity <= tol.psd_slack;
    if (sigma.op.dim_a == 2 && sigma.op.dim_b == 2 && !dec.negatives.empty())
        s.lambda = dec.negatives.front().lambda;

    const EigenSystem bes = hermitian_eig(binegativity(sigma, tol).mat, tol);
    s.bineg_min_eig = bes.min_value();
    return s;
}

SeparableApproximation separable_approximation(const DensityMatrix& sigma, const Tolerances& tol) {
    if (sigma.op.dim_a != 2 || sigma.op.dim_b != 2)
        throw Error("separable_approximation: two-qubit input required");
    const NegativeDecomposition dec = negative_decomposition(sigma, tol);
    if (dec.negatives.empty() || dec.negatives.front().lambda <= tol.psd_slack)
        throw NotEntangled("separable_approximation: input is PPT");

    SeparableApproximation out;
    out.lambda = dec.negatives.front().lambda;
    out.approx = validate(partial_transpose(dec.positive_part, Side::B), tol);
    out.witness =
        partial_transpose({2, 2, outer(dec.negatives.front().psi, dec.negatives.front().psi)},
                          Side::B);
    return out;
}

TheoremFlags check_theorems(const DensityMatrix& sigma, const Tolerances& tol) {
    if (sigma.op.dim_a != 2 || sigma.op.dim_b != 2)
        throw Error("check_theorems: two-qubit input required");

    const NegativeDecomposition dec = negative_decomposition(sigma, tol);
    TheoremFlags f;
    double neg = 0.0;
    for (const NegativeTerm& t : dec.negatives) neg += t.lambda;
    f.entangled = neg > tol.psd_slack;

    const EigenSystem pes = hermitian_eig(dec.positive_part.mat, tol);
    f.p_spectrum = pes.values;
    const EigenSystem ptes =
        hermitian_eig(partial_transpose(dec.positive_part, Side::B).mat, tol);
    f.t1_margin = ptes.min_value();
    f.t1_pass = f.entangled ? f.t1_margin > 0.0 : f.t1_margin >= -tol.psd_slack;

    f.c1_applicable = f.entangled;
    f.c1_rank = numerical_rank(pes, tol.rank_threshold);
    f.c1_pass = !f.c1_applicable || f.c1_rank == 3;

    const EigenSystem bes = hermitian_eig(binegativity(sigma, tol).mat, tol);
    f.t2_margin = bes.min_value();
    f.t2_pass = f.t2_margin >= -tol.psd_slack;
    return f;
}

} // namespace bineg
