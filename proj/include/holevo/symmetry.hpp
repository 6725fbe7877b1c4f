#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ensemble.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "gram.hpp"

namespace holevo {

// A constellation symmetry is represented as an index permutation sigma
// (never as an operator on state space); sigma is a genuine unitary
// symmetry iff it preserves the Gram matrix entrywise, and a genuine
// anti-unitary one iff it maps G to its entrywise conjugate. This is the
// finite, testable shadow of conjugating rho(xi) by the symmetry
// operator.
inline bool is_gram_symmetry(const CMatrix& gram, const std::vector<std::size_t>& sigma,
                             bool antiunitary, double tol = 1e-12) {
    const std::size_t M = gram.size();
    if (sigma.size() != M) throw ValidationError("is_gram_symmetry: permutation length mismatch");
    for (std::size_t i = 0; i < M; ++i)
        if (sigma[i] >= M) throw ValidationError("is_gram_symmetry: permutation index out of range");
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            const cplx expect = antiunitary ? std::conj(gram(i, j)) : gram(i, j);
            if (std::abs(gram(sigma[i], sigma[j]) - expect) > tol) return false;
        }
    return true;
}

// Index permutation realizing amplitude conjugation a -> conj(a) (the
// anti-unitary V_B action), when the constellation is closed under it.
inline std::vector<std::size_t> conjugation_permutation(const Constellation& c,
                                                        double tol = 1e-12) {
    const std::size_t M = c.size();
    std::vector<std::size_t> sigma(M, M);
    for (std::size_t i = 0; i < M; ++i) {
        const ComplexAmplitude target = std::conj(c.amplitudes[i]);
        for (std::size_t j = 0; j < M; ++j) {
            if (std::abs(c.amplitudes[j] - target) <= tol) {
                sigma[i] = j;
                break;
            }
        }
        if (sigma[i] == M)
            throw ValidationError("conjugation_permutation: constellation not closed under "
                                  "amplitude conjugation");
    }
    return sigma;
}

// V_A on 16QAM indices: the quarter rotation advances each ring's orbit
// position by one.
inline std::vector<std::size_t> qam16_va_permutation() {
    std::vector<std::size_t> sigma(16);
    for (std::size_t ring = 0; ring < 4; ++ring)
        for (std::size_t k = 0; k < 4; ++k) sigma[4 * ring + k] = 4 * ring + (k + 1) % 4;
    return sigma;
}

// The parity symmetry of 3ASK (alpha -> -alpha) fixes the vacuum and
// swaps the two displaced states.
inline std::vector<std::size_t> ask3_parity_permutation() { return {0, 2, 1}; }

// V_A orbits of the 16QAM index order: one orbit per ring.
inline std::vector<std::vector<std::size_t>> qam16_va_orbits() {
    return {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}, {12, 13, 14, 15}};
}

// Orbits after additionally merging rings 2a and 2b under the
// anti-unitary conjugation: the three-ring partition behind the
// two-parameter reduction.
inline std::vector<std::vector<std::size_t>> qam16_ring_orbits() {
    return {{0, 1, 2, 3}, {4, 5, 6, 7, 8, 9, 10, 11}, {12, 13, 14, 15}};
}

// Replace each prior component by the mean over its orbit. For orbits
// induced by a genuine symmetry of the constellation this never
// decreases Delta S (concavity plus entropy invariance under the
// symmetry).
inline PriorVector orbit_average(const PriorVector& xi,
                                 const std::vector<std::vector<std::size_t>>& orbits) {
    const std::size_t M = xi.size();
    std::vector<int> seen(M, 0);
    for (const auto& orbit : orbits) {
        if (orbit.empty()) throw ValidationError("orbit_average: empty orbit");
        for (std::size_t i : orbit) {
            if (i >= M) throw ValidationError("orbit_average: orbit index out of range");
            if (seen[i]++) throw ValidationError("orbit_average: index appears in two orbits");
        }
    }
    for (std::size_t i = 0; i < M; ++i)
        if (!seen[i])
            throw ValidationError("orbit_average: orbits do not cover index " + std::to_string(i));

    std::vector<double> out(M);
    for (const auto& orbit : orbits) {
        double mean = 0.0;
        for (std::size_t i : orbit) mean += xi[i];
        mean /= static_cast<double>(orbit.size());
        for (std::size_t i : orbit) out[i] = mean;
    }
    return PriorVector(std::move(out));
}

// The paper's two-parameter 16QAM reduction: xi1 = mean over ring 1,
// xi2 = mean over rings 2a and 2b together (V_A averaging followed by
// the anti-unitary 2a/2b merge); xi3 is then fixed by normalization.
inline std::pair<double, double> reduce_qam16(const PriorVector& xi) {
    if (xi.size() != 16) throw ValidationError("reduce_qam16: prior must have length 16");
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) x1 += xi[k];
    for (std::size_t k = 4; k < 12; ++k) x2 += xi[k];
    return {x1 / 4.0, x2 / 8.0};
}

// Parameter-reduced families of priors and their expansion back to the
// full simplex.
struct SymmetryReduction {
    enum class Kind { FULL_SYMMETRIC, ASK3, QAM16 };

    Kind kind = Kind::FULL_SYMMETRIC;
    std::size_t letters = 1;      // length of the expanded prior
    int free_parameter_count = 0; // 0, 1 or 2

    static SymmetryReduction full_symmetric(std::size_t M) {
        if (M == 0) throw ValidationError("SymmetryReduction: M must be >= 1");
        return {Kind::FULL_SYMMETRIC, M, 0};
    }
    static SymmetryReduction ask3() { return {Kind::ASK3, 3, 1}; }
    static SymmetryReduction qam16() { return {Kind::QAM16, 16, 2}; }

    PriorVector expand(const std::vector<double>& params) const {
        if (params.size() != static_cast<std::size_t>(free_parameter_count))
            throw ValidationError("SymmetryReduction::expand: wrong parameter count");
        switch (kind) {
        case Kind::FULL_SYMMETRIC:
            return uniform_prior(letters);
        case Kind::ASK3: {
            const double x1 = params[0];
            if (!(x1 >= 0.0 && x1 <= 1.0))
                throw ValidationError("ASK3 expansion requires xi1 in [0,1]");
            return PriorVector({x1, (1.0 - x1) / 2.0, (1.0 - x1) / 2.0});
        }
        case Kind::QAM16: {
            const double x1 = params[0], x2 = params[1];
            double x3 = (1.0 - 4.0 * x1 - 8.0 * x2) / 4.0;
            if (!(x1 >= 0.0) || !(x2 >= 0.0) || x3 < -1e-12)
                throw ValidationError("QAM16 expansion requires xi1, xi2 >= 0 and "
                                      "xi1 + 2*xi2 <= 1/4");
            if (x3 < 0.0) x3 = 0.0;
            std::vector<double> xi(16);
            for (std::size_t k = 0; k < 4; ++k) xi[k] = x1;
            for (std::size_t k = 4; k < 12; ++k) xi[k] = x2;
            for (std::size_t k = 12; k < 16; ++k) xi[k] = x3;
            return PriorVector(std::move(xi));
        }
        }
        throw ValidationError("SymmetryReduction::expand: unknown kind");
    }
};

struct SymmetricOptimalityReport {
    int trials = 0;
    double uniform_delta_s_bits = 0.0;
    // max over trials of Delta S(random prior) - Delta S(uniform); the
    // theorem says this never exceeds ~0 (up to numerical noise).
    double max_violation_bits = 0.0;
};

// Empirical check of the symmetric-states theorem: no random prior beats
// the uniform one. Deterministically seeded; a violation shows up in the
// report rather than raising.
inline SymmetricOptimalityReport verify_symmetric_optimality(const Constellation& c, int trials) {
    if (c.kind != ConstellationKind::SYMMETRIC)
        throw ValidationError("verify_symmetric_optimality requires a SYMMETRIC constellation");
    const std::size_t M = c.size();

    SymmetricOptimalityReport report;
    report.trials = trials;
    report.uniform_delta_s_bits = delta_s(c, uniform_prior(M)).bits;
    report.max_violation_bits = -std::numeric_limits<double>::infinity();

    std::mt19937 rng(0x51c7u);
    std::exponential_distribution<double> expo(1.0);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> draw(M);
        double sum = 0.0;
        for (double& x : draw) {
            x = expo(rng);
            sum += x;
        }
        for (double& x : draw) x /= sum; // uniform on the simplex
        const double bits = delta_s(c, PriorVector(std::move(draw))).bits;
        report.max_violation_bits =
            std::max(report.max_violation_bits, bits - report.uniform_delta_s_bits);
    }
    return report;
}

} // namespace holevo
