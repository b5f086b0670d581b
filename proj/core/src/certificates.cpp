#include "bineg/certificates.hpp"

#include "bineg/errors.hpp"

#include <cmath>
#include <sstream>

namespace bineg {

WitnessResult nonpositivity_witness(const NormalForm& nf) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("nonpositivity_witness: BellDiagonal class required");
    const ComplexMatrix t =
        kron(tilde_local(nf.a_filter), tilde_local(nf.b_filter).conjugate());
    const CVec raw = t.apply(bell_state(kPhiPlus));
    WitnessResult w;
    const double n = vec_norm(raw);
    w.l = n * n;
    w.phi = normalized(raw);
    return w;
}

CMatrixResult c_matrix(const NormalForm& nf) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("c_matrix: BellDiagonal class required");
    const ComplexMatrix ta = tilde_local(nf.a_filter);
    const ComplexMatrix tb = tilde_local(nf.b_filter);
    CMatrixResult r;
    r.h1 = ta.adjoint() * ta;
    r.h2 = tb.transpose() * tb.conjugate();
    r.c = r.h1 * r.h2;
    r.tr_cc_star = (r.c * r.c.conjugate()).trace().real();
    return r;
}

double lambda_bound(const NormalForm& nf, double m, const Tolerances& tol) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("lambda_bound: BellDiagonal class required");
    if (nf.p[0] >= 0.5 - tol.zero_band)
        throw P0TooLarge("lambda_bound: p0 >= 1/2, source is not an entangled state's positive part");
    return (1.0 - 2.0 * nf.p[0]) * m / nf.normalization;
}

BipartiteOperator x_operator(const NegativeDecomposition& decomp, double lambda0) {
    if (decomp.positive_part.dim_a != 2 || decomp.positive_part.dim_b != 2 ||
        decomp.negatives.size() != 1)
        throw Error("x_operator: two-qubit decomposition with one negative term required");
    const CVec& psi = decomp.negatives.front().psi;
    return partial_transpose(decomp.positive_part, Side::B) +
           lambda0 * partial_transpose({2, 2, outer(psi, psi)}, Side::B);
}

XPrimeTerms x_prime_terms(const NormalForm& nf) {
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw Error("x_prime_terms: BellDiagonal class required");
    XPrimeTerms out;
    out.term1 = BipartiteOperator(2, 2);
    for (int i = 0; i < 3; ++i)
        out.term1.mat +=
            cplx(2.0 * (nf.p[0] - nf.p[3 - i])) * outer(bell_state(i), bell_state(i));

    const CMatrixResult cm = c_matrix(nf);
    const ComplexMatrix tc = tilde_local(cm.c);
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix inner = kron(tc.adjoint() * tc, i2) + flip_operator(2).mat;
    const ComplexMatrix sandwich = kron(cm.c, i2) * inner * kron(cm.c.adjoint(), i2);
    out.term2 = {2, 2, cplx(1.0 - 2.0 * nf.p[0]) * sandwich};
    return out;
}

BipartiteOperator x_prime_of(const NormalForm& nf, const BipartiteOperator& x) {
    const ComplexMatrix left =
        kron(tilde_local(nf.a_filter).adjoint(), tilde_local(nf.b_filter).transpose());
    return {2, 2, cplx(2.0 * nf.normalization) * (left * x.mat * left.adjoint())};
}

double hyperplane_overlap(const CVec& psi, const CVec& phi) {
    const BipartiteOperator w = partial_transpose({2, 2, outer(psi, psi)}, Side::B);
    const CVec wphi = w.mat.apply(phi);
    return dot(phi, wphi).real();
}

BinegativityCertificate certify(const DensityMatrix& sigma, const Tolerances& tol) {
    if (sigma.op.dim_a != 2 || sigma.op.dim_b != 2)
        throw Error("certify: two-qubit input required");

    const NegativeDecomposition dec = negative_decomposition(sigma, tol);
    if (dec.negatives.empty() || dec.negatives.front().lambda <= tol.psd_slack)
        throw NotEntangled("certify: input is PPT");

    BinegativityCertificate cert;
    cert.lambda = dec.negatives.front().lambda;
    const CVec& psi = dec.negatives.front().psi;

    BipartiteOperator p = dec.positive_part;
    {
        const EigenSystem pes = hermitian_eig(p.mat, tol);
        if (numerical_rank(pes, tol.rank_threshold) < 3) {
            p = rank3_regularize(p, psi, tol);
            cert.regularized = true;
        }
    }

    const NormalForm nf = filter_normal_form(p, tol);
    if (nf.cls != NormalFormClass::BellDiagonal)
        throw CertificateFailure("certify: positive part landed in the sigma_c class",
                                 "normal_form_class");
    cert.p = nf.p;
    cert.n = nf.normalization;

    const KernelState ks = kernel_state(nf, tol);
    cert.m = ks.m;
    const WitnessResult wit = nonpositivity_witness(nf);
    cert.phi = wit.phi;
    cert.l = wit.l;
    const CMatrixResult cm = c_matrix(nf);
    cert.c = cm.c;
    cert.tr_cc_star = cm.tr_cc_star;

    cert.lambda0 = lambda_bound(nf, ks.m, tol);
    const NegativeDecomposition dec1{p, dec.negatives, dec.pt_spectrum};
    cert.x = x_operator(dec1, cert.lambda0);
    cert.weight_x = cert.lambda / cert.lambda0;
    cert.weight_p = 1.0 - cert.weight_x;

    const BipartiteOperator ptb = partial_transpose(p, Side::B);
    cert.margin_pt = hermitian_eig(ptb.mat, tol).min_value();
    cert.margin_x = hermitian_eig(cert.x.mat, tol).min_value();

    // Dual route: recombination against the independently computed
    // binegativity. A regularized P certifies the vicinity state whose
    // partial transpose is P' - lambda |psi><psi|.
    BipartiteOperator bineg = binegativity(sigma, tol);
    if (cert.regularized) {
        const BipartiteOperator sig_pt =
            p - cert.lambda * BipartiteOperator{2, 2, outer(psi, psi)};
        bineg = partial_transpose(operator_abs(sig_pt, tol), Side::B);
    }
    const BipartiteOperator recomb = cert.weight_p * ptb + cert.weight_x * cert.x;
    cert.recombination_error = (bineg.mat - recomb.mat).max_norm();
    cert.hyperplane = hyperplane_overlap(psi, cert.phi);

    auto fail = [&](const char* inv, double value) {
        std::ostringstream os;
        os << "certify: invariant " << inv << " broke (value " << value << "; lambda "
           << cert.lambda << ", lambda0 " << cert.lambda0 << ", TrCC* " << cert.tr_cc_star
           << ", X margin " << cert.margin_x << ", P^TB margin " << cert.margin_pt
           << ", recombination " << cert.recombination_error << ", overlap "
           << cert.hyperplane << ")";
        throw CertificateFailure(os.str(), inv);
    };
    if (cert.tr_cc_star < 2.0 - tol.psd_slack) fail("tr_cc_star_ge_2", cert.tr_cc_star);
    if (cert.lambda > cert.lambda0 + tol.psd_slack) fail("lambda_le_lambda0", cert.lambda);
    if (cert.margin_x < -1e-9) fail("x_positive", cert.margin_x);
    if (cert.recombination_error > tol.cert_recombination)
        fail("convex_recombination", cert.recombination_error);
    if (!(cert.hyperplane > 0.0)) fail("hyperplane_overlap_positive", cert.hyperplane);

    return cert;
}

} // namespace bineg
