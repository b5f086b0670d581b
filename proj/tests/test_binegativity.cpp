#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bineg/binegativity.hpp"
#include "bineg/eig.hpp"
#include "bineg/errors.hpp"
#include "bineg/rng.hpp"
#include "bineg/states.hpp"

#include <cmath>

using namespace bineg;

namespace {

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).max_norm();
}

// Haar-ish local unitary: normalized Ginibre column pair via Gram-Schmidt.
ComplexMatrix random_unitary2(CounterRng& rng) {
    CVec c0(2), c1(2);
    for (int i = 0; i < 2; ++i) {
        double a, b;
        rng.next_gaussian_pair(a, b);
        c0[i] = cplx(a, b);
        rng.next_gaussian_pair(a, b);
        c1[i] = cplx(a, b);
    }
    c0 = normalized(c0);
    const cplx ov = dot(c0, c1);
    for (int i = 0; i < 2; ++i) c1[i] -= ov * c0[i];
    c1 = normalized(c1);
    ComplexMatrix u(2, 2);
    for (int i = 0; i < 2; ++i) {
        u(i, 0) = c0[i];
        u(i, 1) = c1[i];
    }
    return u;
}

} // namespace

TEST_CASE("singlet negative decomposition") {
    const auto dec = negative_decomposition(werner(1.0));
    REQUIRE(dec.negatives.size() == 1);
    CHECK(dec.negatives[0].lambda == doctest::Approx(0.5).epsilon(1e-12));
    // eigenvector is phi+ up to phase
    CHECK(std::abs(dot(dec.negatives[0].psi, bell_state(kPhiPlus))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // P = (I - |phi+><phi+|)/2, the triplet projector over two
    const ComplexMatrix expect =
        cplx(0.5) * (ComplexMatrix::identity(4) - outer(bell_state(kPhiPlus), bell_state(kPhiPlus)));
    CHECK(max_diff(dec.positive_part.mat, expect) < 1e-12);
}

TEST_CASE("werner lambda closed form") {
    for (double p : {0.4, 2.0 / 3.0, 0.9}) {
        const auto dec = negative_decomposition(werner(p));
        REQUIRE(dec.negatives.size() == 1);
        CHECK(dec.negatives[0].lambda == doctest::Approx((3.0 * p - 1.0) / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("PPT input decomposes trivially") {
    const auto dec = negative_decomposition(werner(0.2));
    CHECK(dec.negatives.empty());
    CHECK(max_diff(dec.positive_part.mat, partial_transpose(werner(0.2).op).mat) < 1e-12);
}

TEST_CASE("decomposition reconstructs the partial transpose") {
    EnsembleSpec spec;
    spec.seed = 21;
    spec.count = 100;
    for (long i = 0; i < spec.count; ++i) {
        const DensityMatrix dm = random_state(spec, i);
        const auto dec = negative_decomposition(dm);
        ComplexMatrix rebuilt = dec.positive_part.mat;
        for (const auto& term : dec.negatives)
            rebuilt -= cplx(term.lambda) * outer(term.psi, term.psi);
        CHECK(max_diff(rebuilt, partial_transpose(dm.op).mat) < 1e-10);
        CHECK(hermitian_eig(dec.positive_part.mat).min_value() > -1e-10);
        for (const auto& term : dec.negatives) {
            CHECK(term.lambda > 0.0);
            const CVec pv = dec.positive_part.mat.apply(term.psi);
            CHECK(vec_norm(pv) < 1e-10);
        }
    }
}

TEST_CASE("binegativity anchors") {
    CHECK(max_diff(binegativity(werner(1.0)).mat, cplx(0.5) * ComplexMatrix::identity(4)) <
          1e-12);
    for (double p : {0.5, 0.8, 1.0}) {
        const auto es = hermitian_eig(binegativity(werner(p)).mat);
        CHECK(es.values[0] == doctest::Approx(p / 2.0).epsilon(1e-12));
        CHECK(es.values[2] == doctest::Approx(p / 2.0).epsilon(1e-12));
        CHECK(es.values[3] == doctest::Approx(0.5).epsilon(1e-12));
    }
    // PPT state: binegativity is the state itself
    CHECK(max_diff(binegativity(werner(0.25)).mat, werner(0.25).op.mat) < 1e-12);
}

TEST_CASE("summary fields") {
    const auto bell = summary(werner(1.0));
    CHECK(bell.negativity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bell.log_negativity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(bell.is_ppt);
    CHECK(bell.lambda == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(summary(werner(1.0 / 3.0)).is_ppt);
    CHECK(summary(werner(1.0 / 3.0)).negativity <= 1e-10);

    for (double p : {0.5, 0.7, 0.95}) {
        const auto s = summary(werner(p));
        CHECK(s.log_negativity ==
              doctest::Approx(std::log2((1.0 + 3.0 * p) / 2.0)).epsilon(1e-11));
        CHECK(s.log_negativity ==
              doctest::Approx(std::log2(1.0 + 2.0 * s.negativity)).epsilon(1e-10));
    }
}

TEST_CASE("separable approximation") {
    const auto bell = separable_approximation(werner(1.0));
    // P^{T_B} = I/4 + |psi-><psi-|/2, normalized by 1 + lambda = 3/2
    const ComplexMatrix expect =
        cplx(2.0 / 3.0) * (cplx(0.25) * ComplexMatrix::identity(4) +
                           cplx(0.5) * outer(bell_state(kPsiMinus), bell_state(kPsiMinus)));
    CHECK(max_diff(bell.approx.op.mat, expect) < 1e-12);
    CHECK(bell.lambda == doctest::Approx(0.5).epsilon(1e-12));

    for (double p : {0.5, 0.9}) {
        const auto sep = separable_approximation(werner(p));
        // approx is PPT, hence separable in two qubits
        CHECK(hermitian_eig(partial_transpose(sep.approx.op).mat).min_value() > -1e-10);
        // sigma = (1+lambda) approx - lambda (psi psi)^{T_B}
        const ComplexMatrix rebuilt =
            cplx(1.0 + sep.lambda) * sep.approx.op.mat - cplx(sep.lambda) * sep.witness.mat;
        CHECK(max_diff(rebuilt, werner(p).op.mat) < 1e-10);
    }
    CHECK_THROWS_AS((void)separable_approximation(werner(0.2)), NotEntangled);
}

TEST_CASE("theorem flags on anchors") {
    const auto bell = check_theorems(werner(1.0));
    CHECK(bell.entangled);
    CHECK(bell.t1_margin == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(bell.t1_pass);
    CHECK(bell.c1_applicable);
    CHECK(bell.c1_rank == 3);
    CHECK(bell.c1_pass);
    CHECK(bell.t2_margin == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bell.t2_pass);

    const auto ppt = check_theorems(werner(0.2));
    CHECK_FALSE(ppt.entangled);
    CHECK_FALSE(ppt.c1_applicable);
    CHECK(ppt.t2_pass);

    const auto w = check_theorems(werner(0.4));
    CHECK(w.entangled);
    CHECK(w.t1_pass);
    CHECK(w.c1_pass);
    CHECK(w.t2_pass);
    CHECK(w.t1_margin > 0.0);
    CHECK(w.t2_margin > 0.0);
}

TEST_CASE("midpoint identity and PPT membership of the binegativity") {
    EnsembleSpec spec;
    spec.seed = 23;
    spec.count = 200;
    for (long i = 0; i < spec.count; ++i) {
        const DensityMatrix dm = random_state(spec, i);
        const BipartiteOperator bin = binegativity(dm);
        const auto dec = negative_decomposition(dm);
        // P^{T_B} = sigma/2 + binegativity/2
        const ComplexMatrix mid = cplx(0.5) * dm.op.mat + cplx(0.5) * bin.mat;
        CHECK(max_diff(partial_transpose(dec.positive_part).mat, mid) < 1e-10);
        // the binegativity itself is PPT
        CHECK(hermitian_eig(partial_transpose(bin).mat).min_value() > -1e-10);
        // trace identity
        const auto s = summary(dm);
        CHECK(std::abs(bin.mat.trace().real() - (1.0 + 2.0 * s.negativity)) < 1e-10);
    }
}

TEST_CASE("binegativity spectrum is covariant under local unitaries") {
    EnsembleSpec spec;
    spec.seed = 27;
    spec.count = 20;
    CounterRng rng(27, 1000, 0);
    for (long i = 0; i < spec.count; ++i) {
        const DensityMatrix dm = random_state(spec, i);
        const ComplexMatrix u = kron(random_unitary2(rng), random_unitary2(rng));
        const DensityMatrix rotated = validate(BipartiteOperator{2, 2, u * dm.op.mat * u.adjoint()});
        const auto ea = hermitian_eig(binegativity(dm).mat);
        const auto eb = hermitian_eig(binegativity(rotated).mat);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(ea.values[k] - eb.values[k]) < 1e-10);
    }
}

TEST_CASE("negative eigenvector is always entangled") {
    EnsembleSpec spec;
    spec.seed = 29;
    spec.count = 300;
    for (long i = 0; i < spec.count; ++i) {
        const auto dec = negative_decomposition(random_state(spec, i));
        if (dec.negatives.empty()) continue;
        // Schmidt coefficients of psi: singular values of the 2x2 reshape
        const CVec& psi = dec.negatives[0].psi;
        ComplexMatrix r(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) r(a, b) = psi[a * 2 + b];
        const auto es = hermitian_eig(r * r.adjoint());
        CHECK(std::sqrt(std::max(0.0, es.values[0])) > 1e-8);
        CHECK(std::sqrt(std::max(0.0, es.values[1])) > 1e-8);
    }
}
