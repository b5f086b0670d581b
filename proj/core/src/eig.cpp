#include "bineg/eig.hpp"

#include "bineg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bineg {

ComplexMatrix EigenSystem::reconstruct() const {
    const std::size_t n = values.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += values[k] * vectors(i, k) * std::conj(vectors(j, k));
    return out;
}

double EigenSystem::min_value() const {
    return values.empty() ? 0.0 : values.front();
}

double EigenSystem::max_value() const {
    return values.empty() ? 0.0 : values.back();
}

EigenSystem hermitian_eig(const ComplexMatrix& h, const Tolerances& tol) {
    const std::size_t n = h.rows();
    if (n != h.cols()) throw NonHermitianInput("hermitian_eig: matrix not square");

    const double scale = std::max(1.0, h.max_norm());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol.hermiticity * scale)
                throw NonHermitianInput("hermitian_eig: input not Hermitian within tolerance");

    // Work on the exactly-symmetrized copy.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    double total = 0.0;
    for (const cplx& z : a.data()) total += std::norm(z);
    if (total == 0.0) total = 1.0;

    auto offdiag_mass = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_mass() <= tol.jacobi_offdiag_rel * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const cplx phase = apq / r;  // a(p,q) = r * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary J: J(p,p)=c, J(p,q)=s, J(q,p)=-s*conj(phase), J(q,q)=c*conj(phase).
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);
                // Columns: A <- A J.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + jqp * aiq;
                    a(i, q) = s * aip + jqq * aiq;
                }
                // Rows: A <- J^dagger A.
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj + std::conj(jqp) * aqj;
                    a(q, j) = s * apj + std::conj(jqq) * aqj;
                }
                // Pin the pivots exactly.
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip + jqp * viq;
                    v(i, q) = s * vip + jqq * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        // Phase convention: largest-magnitude component made real nonnegative.
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, order[k]));
            if (m > best + 1e-300 && m > best) {
                best = m;
                imax = i;
            }
        }
        cplx ph = v(imax, order[k]);
        ph = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : cplx(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = ph * v(i, order[k]);
    }
    return es;
}

int numerical_rank(const EigenSystem& es, double threshold_rel) {
    double maxmag = 0.0;
    for (double x : es.values) maxmag = std::max(maxmag, std::abs(x));
    if (maxmag == 0.0) return 0;
    int r = 0;
    for (double x : es.values)
        if (std::abs(x) > threshold_rel * maxmag) ++r;
    return r;
}

} // namespace bineg
