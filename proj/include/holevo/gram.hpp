#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "errors.hpp"
#include "matrix.hpp"

namespace holevo {

// Pairwise-overlap matrix G[i][j] = <psi_i|psi_j>: Hermitian, unit
// diagonal, positive semidefinite.
struct GramMatrix {
    CMatrix entries;

    std::size_t size() const { return entries.size(); }
};

// A(xi) = diag(sqrt(xi)) * G * diag(sqrt(xi)); trace 1. Its nonzero
// spectrum equals that of the density operator rho(xi) for pure letter
// states, which is all the entropy computation needs.
struct WeightedGram {
    CMatrix entries;

    std::size_t size() const { return entries.size(); }
};

// <beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta)*gamma).
// In particular <0|alpha> = exp(-|alpha|^2/2) (the paper's kappa).
inline cplx coherent_overlap(ComplexAmplitude beta, ComplexAmplitude gamma) {
    detail::require_finite(beta, "coherent_overlap");
    detail::require_finite(gamma, "coherent_overlap");
    return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma);
}

inline GramMatrix gram_of(const Constellation& c) {
    const std::size_t M = c.size();
    GramMatrix g{CMatrix(M)};
    for (std::size_t i = 0; i < M; ++i) {
        g.entries(i, i) = 1.0;
        for (std::size_t j = i + 1; j < M; ++j) {
            const cplx v = coherent_overlap(c.amplitudes[i], c.amplitudes[j]);
            g.entries(i, j) = v;
            g.entries(j, i) = std::conj(v);
        }
    }
    return g;
}

// Structural checks on a (possibly user-supplied) Gram matrix:
// Hermiticity and unit diagonal. Positive semidefiniteness needs the
// eigensolver and is checked where spectra are computed.
inline void validate_gram_structure(const CMatrix& g) {
    const std::size_t M = g.size();
    if (M == 0) throw ValidationError("Gram matrix must be nonempty");
    for (std::size_t i = 0; i < M; ++i) {
        const cplx d = g(i, i);
        if (std::abs(d - cplx(1.0, 0.0)) > 1e-9)
            throw ValidationError("Gram diagonal entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(i + 1) + ") = " + std::to_string(d.real()) +
                                  (d.imag() >= 0 ? "+" : "") + std::to_string(d.imag()) +
                                  "i, expected 1 (1-based indices)");
    }
    if (hermiticity_defect(g) > 1e-12)
        throw ValidationError("Gram matrix is not Hermitian within 1e-12");
}

inline WeightedGram weighted_gram(const GramMatrix& g, const PriorVector& xi) {
    const std::size_t M = g.size();
    if (xi.size() != M)
        throw ValidationError("weighted_gram: prior length " + std::to_string(xi.size()) +
                              " does not match Gram dimension " + std::to_string(M));
    std::vector<double> s(M);
    for (std::size_t i = 0; i < M; ++i) s[i] = std::sqrt(xi[i]);
    WeightedGram a{CMatrix(M)};
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) a.entries(i, j) = s[i] * s[j] * g.entries(i, j);
    return a;
}

} // namespace holevo
