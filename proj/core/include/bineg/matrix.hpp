#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bineg {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Dense row-major complex matrix. Small fixed sizes only (n <= 16 here),
// so everything is plain loops over contiguous storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cplx trace() const;
    double max_norm() const;        // max |entry|
    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    CVec apply(const CVec& v) const;  // matrix * vector

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

// |v><w|
ComplexMatrix outer(const CVec& v, const CVec& w);

cplx dot(const CVec& v, const CVec& w);  // <v|w>
double vec_norm(const CVec& v);
CVec normalized(const CVec& v);

// Spin-flip: sigma_y A* sigma_y for 2x2 operators.
ComplexMatrix tilde_local(const ComplexMatrix& a);
// (sigma_y (x) sigma_y) |psi*> for two-qubit vectors.
CVec tilde_state(const CVec& psi);

cplx det2(const ComplexMatrix& a);
ComplexMatrix inverse2(const ComplexMatrix& a);

extern const ComplexMatrix kPauliX;
extern const ComplexMatrix kPauliY;
extern const ComplexMatrix kPauliZ;

} // namespace bineg
