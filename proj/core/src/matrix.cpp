#include "bineg/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace bineg {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = std::conj(data_[k]);
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_norm() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in *");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

CVec ComplexMatrix::apply(const CVec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("shape mismatch in apply");
    CVec out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const cplx xij = x(i, j);
            for (std::size_t k = 0; k < y.rows(); ++k)
                for (std::size_t l = 0; l < y.cols(); ++l)
                    out(i * y.rows() + k, j * y.cols() + l) = xij * y(k, l);
        }
    return out;
}

ComplexMatrix outer(const CVec& v, const CVec& w) {
    ComplexMatrix m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
}

cplx dot(const CVec& v, const CVec& w) {
    if (v.size() != w.size()) throw std::invalid_argument("size mismatch in dot");
    cplx s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * w[i];
    return s;
}

double vec_norm(const CVec& v) { return std::sqrt(std::abs(dot(v, v))); }

CVec normalized(const CVec& v) {
    const double n = vec_norm(v);
    if (n <= 0.0) throw std::invalid_argument("cannot normalize zero vector");
    CVec out = v;
    for (cplx& z : out) z /= n;
    return out;
}

namespace {
ComplexMatrix make_pauli(char which) {
    ComplexMatrix m(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
        default:  m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    }
    return m;
}
} // namespace

const ComplexMatrix kPauliX = make_pauli('x');
const ComplexMatrix kPauliY = make_pauli('y');
const ComplexMatrix kPauliZ = make_pauli('z');

ComplexMatrix tilde_local(const ComplexMatrix& a) {
    if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("tilde_local needs 2x2");
    return kPauliY * a.conjugate() * kPauliY;
}

CVec tilde_state(const CVec& psi) {
    if (psi.size() != 4) throw std::invalid_argument("tilde_state needs a 4-vector");
    // sigma_y (x) sigma_y is the antidiagonal (-1, 1, 1, -1).
    return {-std::conj(psi[3]), std::conj(psi[2]), std::conj(psi[1]), -std::conj(psi[0])};
}

cplx det2(const ComplexMatrix& a) {
    if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("det2 needs 2x2");
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

ComplexMatrix inverse2(const ComplexMatrix& a) {
    const cplx d = det2(a);
    if (std::abs(d) == 0.0) throw std::invalid_argument("singular 2x2 matrix");
    ComplexMatrix m(2, 2);
    m(0, 0) = a(1, 1) / d;
    m(0, 1) = -a(0, 1) / d;
    m(1, 0) = -a(1, 0) / d;
    m(1, 1) = a(0, 0) / d;
    return m;
}

} // namespace bineg
