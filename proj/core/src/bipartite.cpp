#include "bineg/bipartite.hpp"

#include "bineg/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace bineg {

void require_hermitian(const BipartiteOperator& op, const Tolerances& tol) {
    const std::size_t n = op.mat.rows();
    if (n != op.mat.cols() || static_cast<int>(n) != op.dim())
        throw NonHermitianInput("bipartite operator has inconsistent dimensions");
    const double scale = std::max(1.0, op.mat.max_norm());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(op.mat(i, j) - std::conj(op.mat(j, i))) > tol.hermiticity * scale)
                throw NonHermitianInput("bipartite operator not Hermitian within tolerance");
}

BipartiteOperator partial_transpose(const BipartiteOperator& m, Side side) {
    const int da = m.dim_a, db = m.dim_b;
    BipartiteOperator out(da, db);
    for (int a = 0; a < da; ++a)
        for (int ap = 0; ap < da; ++ap)
            for (int b = 0; b < db; ++b)
                for (int bp = 0; bp < db; ++bp) {
                    const int i = a * db + b, j = ap * db + bp;
                    if (side == Side::B)
                        out.mat(i, j) = m.mat(a * db + bp, ap * db + b);
                    else
                        out.mat(i, j) = m.mat(ap * db + b, a * db + bp);
                }
    return out;
}

BipartiteOperator operator_abs(const BipartiteOperator& h, const Tolerances& tol) {
    const EigenSystem es = hermitian_eig(h.mat, tol);
    const std::size_t n = h.mat.rows();
    BipartiteOperator out(h.dim_a, h.dim_b);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = std::abs(es.values[k]);
        if (v == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.mat(i, j) += v * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return out;
}

double trace_norm(const BipartiteOperator& h, const Tolerances& tol) {
    const EigenSystem es = hermitian_eig(h.mat, tol);
    double s = 0.0;
    for (double v : es.values) s += std::abs(v);
    return s;
}

BipartiteOperator flip_operator(int d) {
    BipartiteOperator v(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) v.mat(a * d + b, b * d + a) = 1.0;
    return v;
}

BipartiteOperator operator+(const BipartiteOperator& a, const BipartiteOperator& b) {
    if (a.dim_a != b.dim_a || a.dim_b != b.dim_b)
        throw std::invalid_argument("bipartite dims mismatch");
    return {a.dim_a, a.dim_b, a.mat + b.mat};
}

BipartiteOperator operator-(const BipartiteOperator& a, const BipartiteOperator& b) {
    if (a.dim_a != b.dim_a || a.dim_b != b.dim_b)
        throw std::invalid_argument("bipartite dims mismatch");
    return {a.dim_a, a.dim_b, a.mat - b.mat};
}

BipartiteOperator operator*(double s, const BipartiteOperator& a) {
    return {a.dim_a, a.dim_b, cplx(s) * a.mat};
}

ComplexMatrix partial_trace_b(const BipartiteOperator& op) {
    const int da = op.dim_a, db = op.dim_b;
    ComplexMatrix out(da, da);
    for (int a = 0; a < da; ++a)
        for (int ap = 0; ap < da; ++ap)
            for (int b = 0; b < db; ++b) out(a, ap) += op.mat(a * db + b, ap * db + b);
    return out;
}

ComplexMatrix partial_trace_a(const BipartiteOperator& op) {
    const int da = op.dim_a, db = op.dim_b;
    ComplexMatrix out(db, db);
    for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp)
            for (int a = 0; a < da; ++a) out(b, bp) += op.mat(a * db + b, a * db + bp);
    return out;
}

double hs_inner(const BipartiteOperator& a, const BipartiteOperator& b) {
    if (a.mat.rows() != b.mat.rows()) throw std::invalid_argument("hs_inner dims mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.mat.rows(); ++i)
        for (std::size_t j = 0; j < a.mat.cols(); ++j)
            s += std::conj(a.mat(i, j)) * b.mat(i, j);
    return s.real();
}

} // namespace bineg
