#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace holevo {

// Coherent-state label alpha in C; |alpha|^2 is the mean photon number.
using ComplexAmplitude = std::complex<double>;

enum class ConstellationKind { GENERIC, SYMMETRIC, ASK3, QAM16 };

// Ordered list of coherent-state amplitudes plus a tag recording which
// symmetry structure (if any) the constructor guarantees.
struct Constellation {
    ConstellationKind kind = ConstellationKind::GENERIC;
    std::vector<ComplexAmplitude> amplitudes;

    std::size_t size() const { return amplitudes.size(); }
};

// Probability vector on the simplex: componentwise >= 0, sums to 1
// within 1e-12. Construction validates; contents are immutable after.
class PriorVector {
public:
    explicit PriorVector(std::vector<double> xi) : xi_(std::move(xi)) {
        if (xi_.empty()) throw ValidationError("prior vector must be nonempty");
        double sum = 0.0;
        for (double x : xi_) {
            if (!(x >= 0.0)) throw ValidationError("prior component negative or NaN");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("prior components sum to " + std::to_string(sum) +
                                  ", expected 1 within 1e-12");
    }

    std::size_t size() const { return xi_.size(); }
    double operator[](std::size_t i) const { return xi_[i]; }
    const std::vector<double>& values() const { return xi_; }

private:
    std::vector<double> xi_;
};

inline PriorVector uniform_prior(std::size_t M) {
    if (M == 0) throw ValidationError("uniform_prior requires M >= 1");
    return PriorVector(std::vector<double>(M, 1.0 / static_cast<double>(M)));
}

namespace detail {

inline void require_finite(ComplexAmplitude a, const char* who) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw ValidationError(std::string(who) + ": amplitude must be finite");
}

} // namespace detail

// M symmetric states: the orbit of alpha under the rotation
// V = exp(-i theta n) with theta = 2*pi/M, i.e. alpha_k = alpha * exp(-2*pi*i*k/M).
inline Constellation make_psk(std::size_t M, ComplexAmplitude alpha) {
    if (M == 0) throw ValidationError("make_psk requires M >= 1");
    detail::require_finite(alpha, "make_psk");
    Constellation c;
    c.kind = ConstellationKind::SYMMETRIC;
    c.amplitudes.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double theta = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(M);
        c.amplitudes.push_back(alpha * std::polar(1.0, theta));
    }
    c.amplitudes[0] = alpha; // ensure k = 0 is bit-exact
    return c;
}

// Ternary amplitude-shift-keyed set {0, alpha, -alpha} for real alpha >= 0.
inline Constellation make_ask3(double alpha) {
    if (!(alpha >= 0.0)) throw ValidationError("make_ask3 requires alpha >= 0");
    Constellation c;
    c.kind = ConstellationKind::ASK3;
    c.amplitudes = {ComplexAmplitude(0.0, 0.0), ComplexAmplitude(alpha, 0.0),
                    ComplexAmplitude(-alpha, 0.0)};
    return c;
}

// 16QAM grid alpha*(+-1+-i, +-3+-i, +-1+-3i, +-3+-3i), indexed ring-major:
// ring 1 (orbit of alpha*(1+i)), ring 2a (alpha*(3+i)), ring 2b
// (alpha*(1+3i)), ring 3 (alpha*(3+3i)); within each ring the orbit of
// the quarter rotation exp(-pi*i/2) = -i applied 0..3 times.
inline Constellation make_qam16(double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("make_qam16 requires alpha > 0");
    Constellation c;
    c.kind = ConstellationKind::QAM16;
    c.amplitudes.reserve(16);
    const ComplexAmplitude reps[4] = {{1.0, 1.0}, {3.0, 1.0}, {1.0, 3.0}, {3.0, 3.0}};
    const ComplexAmplitude rot(0.0, -1.0);
    for (const ComplexAmplitude& rep : reps) {
        ComplexAmplitude a = alpha * rep;
        for (int k = 0; k < 4; ++k) {
            c.amplitudes.push_back(a);
            a *= rot;
        }
    }
    return c;
}

// Arbitrary pure coherent ensemble without symmetry structure.
inline Constellation make_generic(std::vector<ComplexAmplitude> amplitudes) {
    if (amplitudes.empty()) throw ValidationError("make_generic requires at least one amplitude");
    for (ComplexAmplitude a : amplitudes) detail::require_finite(a, "make_generic");
    Constellation c;
    c.kind = ConstellationKind::GENERIC;
    c.amplitudes = std::move(amplitudes);
    return c;
}

} // namespace holevo
