#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace holevo {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major storage. Deliberately minimal:
// just what the spectral and entropy paths need, not a linear-algebra
// library.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

    std::size_t size() const { return n_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

inline CMatrix adjoint(const CMatrix& m) {
    const std::size_t n = m.size();
    CMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ValidationError("matrix dimension mismatch in multiply");
    CMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline double frobenius_norm(const CMatrix& m) {
    double s = 0.0;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

// Frobenius norm of the strictly off-diagonal part; the Jacobi
// convergence measure.
inline double off_diagonal_norm(const CMatrix& m) {
    double s = 0.0;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ValidationError("matrix dimension mismatch in max_abs_diff");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// max |A[i][j] - conj(A[j][i])|: zero for an exactly Hermitian matrix.
inline double hermiticity_defect(const CMatrix& m) {
    double d = 0.0;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

} // namespace holevo
