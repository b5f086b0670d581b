#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bineg/bipartite.hpp"
#include "bineg/eig.hpp"
#include "bineg/errors.hpp"
#include "bineg/matrix.hpp"
#include "bineg/rng.hpp"
#include "bineg/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace bineg;

namespace {

// Independent eigenvalue oracle: classic cyclic Jacobi in long double on the
// 2n x 2n real symmetric embedding [[Re H, -Im H], [Im H, Re H]], run for a
// fixed 100 sweeps. Each eigenvalue of H appears twice in the embedding.
std::vector<double> oracle_eigenvalues(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    const std::size_t m = 2 * n;
    std::vector<long double> a(m * m, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i * m + j] = static_cast<long double>(h(i, j).real());
            a[(i + n) * m + (j + n)] = static_cast<long double>(h(i, j).real());
            a[i * m + (j + n)] = static_cast<long double>(-h(i, j).imag());
            a[(i + n) * m + j] = static_cast<long double>(h(i, j).imag());
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        for (std::size_t p = 0; p + 1 < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                const long double apq = a[p * m + q];
                if (apq == 0.0L) continue;
                const long double theta = (a[q * m + q] - a[p * m + p]) / (2.0L * apq);
                const long double t =
                    (theta >= 0.0L ? 1.0L : -1.0L) /
                    (std::abs(theta) + std::sqrt(1.0L + theta * theta));
                const long double c = 1.0L / std::sqrt(1.0L + t * t);
                const long double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const long double akp = a[k * m + p], akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const long double apk = a[p * m + k], aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<long double> diag(m);
    for (std::size_t i = 0; i < m; ++i) diag[i] = a[i * m + i];
    std::sort(diag.begin(), diag.end());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>((diag[2 * i] + diag[2 * i + 1]) / 2.0L);
    return out;
}

ComplexMatrix random_hermitian(CounterRng& rng, std::size_t n) {
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double a, b;
        rng.next_gaussian_pair(a, b);
        h(i, i) = a;
        for (std::size_t j = i + 1; j < n; ++j) {
            rng.next_gaussian_pair(a, b);
            h(i, j) = cplx(a, b);
            h(j, i) = cplx(a, -b);
        }
    }
    return h;
}

ComplexMatrix random_2x2(CounterRng& rng) {
    ComplexMatrix m(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double a, b;
            rng.next_gaussian_pair(a, b);
            m(i, j) = cplx(a, b);
        }
    return m;
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).max_norm();
}

} // namespace

TEST_CASE("identity eigendecomposition") {
    const auto es = hermitian_eig(ComplexMatrix::identity(4));
    for (double v : es.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_diff(es.reconstruct(), ComplexMatrix::identity(4)) < 1e-11);
}

TEST_CASE("flip operator spectrum is -1,1,1,1") {
    const auto es = hermitian_eig(flip_operator(2).mat);
    CHECK(es.values[0] == doctest::Approx(-1.0).epsilon(1e-13));
    for (int i = 1; i < 4; ++i) CHECK(es.values[i] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eigenvalues match the long double Jacobi oracle to 1e-11") {
    for (std::size_t n : {2u, 4u, 9u}) {
        for (int trial = 0; trial < 20; ++trial) {
            CounterRng rng(303, trial, n);
            const ComplexMatrix h = random_hermitian(rng, n);
            const auto es = hermitian_eig(h);
            const auto ref = oracle_eigenvalues(h);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(es.values[i] - ref[i]) < 1e-11);
        }
    }
}

TEST_CASE("eigensystem reconstruction and orthonormality") {
    CounterRng rng(7, 0, 0);
    for (int trial = 0; trial < 25; ++trial) {
        ComplexMatrix h = random_hermitian(rng, 4);
        // unit trace scale per the reconstruction contract
        const double scale = std::max(1.0, h.max_norm());
        h *= cplx(1.0 / scale);
        const auto es = hermitian_eig(h);
        CHECK(max_diff(es.reconstruct(), h) < 1e-11);
        const ComplexMatrix gram = es.vectors.adjoint() * es.vectors;
        CHECK(max_diff(gram, ComplexMatrix::identity(4)) < 1e-11);
        // ascending order
        for (int i = 1; i < 4; ++i) CHECK(es.values[i] >= es.values[i - 1]);
    }
}

TEST_CASE("eigendecomposition is deterministic") {
    CounterRng rng(11, 1, 0);
    const ComplexMatrix h = random_hermitian(rng, 4);
    const auto a = hermitian_eig(h);
    const auto b = hermitian_eig(h);
    CHECK(a.values == b.values);
    CHECK(a.vectors.data() == b.vectors.data());
}

TEST_CASE("eigenvalues invariant under basis permutation") {
    CounterRng rng(13, 2, 0);
    const ComplexMatrix h = random_hermitian(rng, 4);
    ComplexMatrix perm(4, 4);
    const int p[4] = {2, 0, 3, 1};
    for (int i = 0; i < 4; ++i) perm(p[i], i) = 1.0;
    const ComplexMatrix hp = perm * h * perm.adjoint();
    const auto ea = hermitian_eig(h);
    const auto eb = hermitian_eig(hp);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ea.values[i] - eb.values[i]) < 1e-12);
}

TEST_CASE("non-Hermitian input rejected") {
    ComplexMatrix m = ComplexMatrix::identity(4);
    m(0, 1) = cplx(0.1, 0.2);
    CHECK_THROWS_AS((void)hermitian_eig(m), NonHermitianInput);
}

TEST_CASE("partial transpose of the singlet") {
    // (|psi-><psi-|)^{T_B} = I/2 - |phi+><phi+|
    const BipartiteOperator singlet{2, 2, outer(bell_state(kPsiMinus), bell_state(kPsiMinus))};
    const ComplexMatrix expect =
        cplx(0.5) * ComplexMatrix::identity(4) - outer(bell_state(kPhiPlus), bell_state(kPhiPlus));
    CHECK(max_diff(partial_transpose(singlet).mat, expect) < 1e-15);
}

TEST_CASE("partial transpose basics") {
    const BipartiteOperator d{2, 2, cplx(0.25) * ComplexMatrix::identity(4)};
    CHECK(max_diff(partial_transpose(d).mat, d.mat) == 0.0);

    CounterRng rng(17, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix h = random_hermitian(rng, 4);
        const BipartiteOperator op{2, 2, h};
        // involution is exact
        CHECK(max_diff(partial_transpose(partial_transpose(op)).mat, h) == 0.0);
        // T_A and T_B spectra agree (they differ by a global transpose)
        const auto ea = hermitian_eig(partial_transpose(op, Side::A).mat);
        const auto eb = hermitian_eig(partial_transpose(op, Side::B).mat);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(ea.values[i] - eb.values[i]) < 1e-11);
        // trace and hermiticity preserved
        CHECK(std::abs((partial_transpose(op).mat.trace() - h.trace())) < 1e-14);
        CHECK_NOTHROW(require_hermitian(partial_transpose(op)));
    }
}

TEST_CASE("operator absolute value") {
    CHECK(max_diff(operator_abs(flip_operator(2)).mat, ComplexMatrix::identity(4)) < 1e-12);

    // |sigma^{T_B}| for Werner p equals (1+p)/4 I + (p-1)/2 |phi+><phi+|
    for (double p : {0.4, 0.7, 1.0}) {
        const BipartiteOperator pt = partial_transpose(werner(p).op);
        const ComplexMatrix expect =
            cplx((1.0 + p) / 4.0) * ComplexMatrix::identity(4) +
            cplx((p - 1.0) / 2.0) * outer(bell_state(kPhiPlus), bell_state(kPhiPlus));
        CHECK(max_diff(operator_abs(pt).mat, expect) < 1e-12);
    }

    CounterRng rng(19, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix h = random_hermitian(rng, 4);
        const BipartiteOperator op{2, 2, h};
        const BipartiteOperator abs_op = operator_abs(op);
        // positive input is a fixed point
        CHECK(max_diff(operator_abs(abs_op).mat, abs_op.mat) < 1e-10);
        // |H|^2 = H^2, scaled tolerance
        const double scale = h.max_norm() * h.max_norm();
        CHECK(max_diff(abs_op.mat * abs_op.mat, h * h) < 1e-10 * std::max(1.0, scale));
        CHECK(hermitian_eig(abs_op.mat).min_value() > -1e-10);
    }
}

TEST_CASE("kron identities") {
    CHECK(max_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                   ComplexMatrix::identity(4)) == 0.0);
    CounterRng rng(23, 0, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_2x2(rng), b = random_2x2(rng);
        const ComplexMatrix c = random_2x2(rng), d = random_2x2(rng);
        CHECK(max_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
    }
}

TEST_CASE("sigma2 x sigma2 on conj phi+ matches tilde_state") {
    // (sigma2 (x) sigma2)|psi*> is exactly the tilde operation on states
    ComplexMatrix s2s2(4, 4);
    s2s2(0, 3) = -1.0;
    s2s2(1, 2) = 1.0;
    s2s2(2, 1) = 1.0;
    s2s2(3, 0) = -1.0;
    CounterRng rng(29, 0, 0);
    for (int trial = 0; trial < 10; ++trial) {
        CVec psi(4);
        for (auto& x : psi) {
            double a, b;
            rng.next_gaussian_pair(a, b);
            x = cplx(a, b);
        }
        CVec conj_psi(4);
        for (int i = 0; i < 4; ++i) conj_psi[i] = std::conj(psi[i]);
        const CVec lhs = s2s2.apply(conj_psi);
        const CVec rhs = tilde_state(psi);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-15);
    }
    // phi+ maps to -phi+ up to the embedding sign pattern: components 0 and 3 negated
    const CVec t = tilde_state(bell_state(kPhiPlus));
    CHECK(std::abs(t[0] + bell_state(kPhiPlus)[0]) < 1e-15);
    CHECK(std::abs(t[3] + bell_state(kPhiPlus)[3]) < 1e-15);
}

TEST_CASE("tilde operation identities") {
    CHECK(max_diff(tilde_local(ComplexMatrix::identity(2)), ComplexMatrix::identity(2)) == 0.0);
    CounterRng rng(31, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_2x2(rng);
        // double tilde is the identity
        CHECK(max_diff(tilde_local(tilde_local(a)), a) <= 1e-15);
        // adjugate identity: tilde(A)^dag A = det(A) I, equivalently A^dag tilde(A) = conj(det(A)) I
        const ComplexMatrix prod = a.adjoint() * tilde_local(a);
        const cplx det = det2(a);
        CHECK(std::abs(prod(0, 0) - std::conj(det)) < 1e-12 * std::max(1.0, std::abs(det)));
        CHECK(std::abs(prod(0, 1)) < 1e-12 * std::max(1.0, std::abs(det)));
        // det-1 gauge gives A^dag tilde(A) = I
        const ComplexMatrix u = a * (cplx(1.0) / std::sqrt(det));
        CHECK(max_diff(u.adjoint() * tilde_local(u), ComplexMatrix::identity(2)) < 1e-10);
    }
}

TEST_CASE("trace norm") {
    CHECK(trace_norm(BipartiteOperator{2, 2, cplx(0.25) * ComplexMatrix::identity(4)}) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(trace_norm(flip_operator(2)) == doctest::Approx(4.0).epsilon(1e-13));
    for (double p : {0.5, 0.8, 1.0})
        CHECK(trace_norm(partial_transpose(werner(p).op)) ==
              doctest::Approx((1.0 + 3.0 * p) / 2.0).epsilon(1e-12));
}

TEST_CASE("flip intertwining identity") {
    // (A (x) B) V (A^dag (x) B^dag) = (A B^dag (x) I) V (B A^dag (x) I)
    const ComplexMatrix v = flip_operator(2).mat;
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CounterRng rng(37, 0, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_2x2(rng), b = random_2x2(rng);
        const ComplexMatrix lhs = kron(a, b) * v * kron(a.adjoint(), b.adjoint());
        const ComplexMatrix rhs = kron(a * b.adjoint(), i2) * v * kron(b * a.adjoint(), i2);
        CHECK(max_diff(lhs, rhs) < 1e-11 * std::max(1.0, lhs.max_norm()));
    }
}

TEST_CASE("numerical rank") {
    ComplexMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 0.5;
    m(2, 2) = 1e-14;
    CHECK(numerical_rank(hermitian_eig(m), 1e-10) == 2);
    CHECK(numerical_rank(hermitian_eig(ComplexMatrix::identity(4)), 1e-10) == 4);
}
