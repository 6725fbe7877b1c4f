#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "errors.hpp"
#include "gram.hpp"
#include "matrix.hpp"
#include "spectral.hpp"

namespace holevo {

// Entropy in both units; bits = nats / ln 2. All public values are
// reported in bits, internal computation uses natural logs.
struct EntropyValue {
    double bits = 0.0;
    double nats = 0.0;
};

// Eigenvalues below this are treated as exact zeros when deciding the
// support of rho(xi) in the gradient's kernel test.
inline constexpr double kKernelTol = 1e-12;

namespace detail {

// -sum lambda ln lambda over positive entries; assumes clamped input.
inline double entropy_nats_of_clamped(const std::vector<double>& lambdas) {
    double s = 0.0;
    for (double l : lambdas)
        if (l > 0.0) s -= l * std::log(l);
    return s;
}

} // namespace detail

// S = -sum lambda log lambda with the continuity convention 0*log 0 = 0.
// Input must be a probability spectrum: entries >= -1e-10 (small
// negatives are clamped), sum within 1e-6 of 1 (renormalized internally).
inline EntropyValue entropy_from_eigenvalues(std::vector<double> lambdas) {
    lambdas = clamp_density_spectrum(std::move(lambdas));
    double sum = 0.0;
    for (double l : lambdas) sum += l;
    if (std::abs(sum - 1.0) > 1e-6)
        throw ValidationError("entropy_from_eigenvalues: eigenvalues sum to " +
                              std::to_string(sum) + ", expected 1 within 1e-6");
    EntropyValue e;
    for (double l : lambdas) {
        const double p = l / sum;
        if (p > 0.0) e.nats -= p * std::log(p);
    }
    e.bits = e.nats / M_LN2;
    return e;
}

// Spectrum of rho(xi) via the weighted Gram matrix (clamped).
inline std::vector<double> density_eigenvalues(const Constellation& c, const PriorVector& xi) {
    const Spectrum spec = hermitian_eig(weighted_gram(gram_of(c), xi).entries);
    return clamp_density_spectrum(spec.eigenvalues);
}

// Delta S(xi) = S(rho(xi)) - sum_i xi_i S(rho_i) = S(rho(xi)) for pure
// letter states.
inline EntropyValue delta_s(const Constellation& c, const PriorVector& xi) {
    return entropy_from_eigenvalues(density_eigenvalues(c, xi));
}

namespace detail {

// Gradient of S(rho(xi)) in nats per unit prior, from a precomputed Gram
// matrix and weighted-Gram spectrum:
//   dS/dxi_i = -<psi_i| ln rho |psi_i> - 1
//            = -sum_j |u_j^dag v_i|^2 (ln lambda_j)/lambda_j - 1
// with v_i = diag(sqrt(xi)) * G[:,i] and u_j the weighted-Gram
// eigenvectors of nonzero lambda_j. For a letter with xi_i = 0 whose
// state sticks out of the support of rho(xi), the directional derivative
// is +infinity; such components are flagged with +inf rather than
// raising, so optimizers can react.
inline std::vector<double> entropy_gradient_nats(const CMatrix& gram,
                                                 const std::vector<double>& xi,
                                                 const Spectrum& spec) {
    const std::size_t M = gram.size();
    std::vector<double> sq(M);
    for (std::size_t k = 0; k < M; ++k) sq[k] = std::sqrt(xi[k]);

    std::vector<double> grad(M);
    std::vector<cplx> v(M);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t k = 0; k < M; ++k) v[k] = sq[k] * gram(k, i);

        double acc = 0.0;       // sum |u_j^dag v_i|^2 ln(lambda_j)/lambda_j
        double range_mass = 0.0; // sum |u_j^dag v_i|^2 / lambda_j = <psi_i|P_range|psi_i>
        for (std::size_t j = 0; j < M; ++j) {
            const double lam = spec.eigenvalues[j];
            if (lam <= kKernelTol) continue;
            cplx w = 0.0;
            for (std::size_t k = 0; k < M; ++k) w += std::conj(spec.eigenvectors(k, j)) * v[k];
            const double p = std::norm(w);
            acc += p * std::log(lam) / lam;
            range_mass += p / lam;
        }

        if (xi[i] == 0.0 && 1.0 - range_mass >= 1e-12) {
            grad[i] = std::numeric_limits<double>::infinity();
        } else {
            grad[i] = -acc - 1.0;
        }
    }
    return grad;
}

} // namespace detail

// Gradient of delta_s with respect to the prior, in bits per unit prior.
// Components flagged +inf mark letters outside the support of rho(xi)
// whose activation gives unbounded first-order gain.
inline std::vector<double> delta_s_gradient(const Constellation& c, const PriorVector& xi) {
    const GramMatrix g = gram_of(c);
    const Spectrum spec = hermitian_eig(weighted_gram(g, xi).entries);
    std::vector<double> grad = detail::entropy_gradient_nats(g.entries, xi.values(), spec);
    for (double& x : grad)
        if (std::isfinite(x)) x /= M_LN2;
    return grad;
}

// Suggested Fock truncation for fock_entropy_oracle: largest mean photon
// number plus ten standard deviations plus margin keeps every state's
// tail probability below 1e-12.
inline std::size_t fock_nmax_guideline(const Constellation& c) {
    double nbar_max = 0.0;
    for (ComplexAmplitude a : c.amplitudes) nbar_max = std::max(nbar_max, std::norm(a));
    return static_cast<std::size_t>(std::ceil(nbar_max + 10.0 * std::sqrt(nbar_max) + 20.0));
}

// Independent test oracle: materializes rho(xi) in the truncated number
// basis from the coherent-state coefficients e^{-|a|^2/2} a^n / sqrt(n!)
// and diagonalizes it directly, bypassing the Gram-matrix route
// entirely. Test-only; production paths use closed-form overlaps.
inline EntropyValue fock_entropy_oracle(const Constellation& c, const PriorVector& xi,
                                        std::size_t n_max) {
    const std::size_t M = c.size();
    if (xi.size() != M) throw ValidationError("fock_entropy_oracle: prior length mismatch");
    if (n_max == 0) throw ValidationError("fock_entropy_oracle: n_max must be positive");

    const std::size_t dim = n_max + 1;
    std::vector<std::vector<cplx>> coeff(M, std::vector<cplx>(dim));
    for (std::size_t i = 0; i < M; ++i) {
        const ComplexAmplitude a = c.amplitudes[i];
        cplx cn = std::exp(-0.5 * std::norm(a));
        double mass = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            coeff[i][n] = cn;
            mass += std::norm(cn);
            cn *= a / std::sqrt(static_cast<double>(n + 1));
        }
        if (1.0 - mass >= 1e-12)
            throw ValidationError("fock_entropy_oracle: truncation tail " +
                                  std::to_string(1.0 - mass) + " above threshold at n_max = " +
                                  std::to_string(n_max));
    }

    CMatrix rho(dim);
    for (std::size_t i = 0; i < M; ++i) {
        if (xi[i] == 0.0) continue;
        for (std::size_t m = 0; m < dim; ++m)
            for (std::size_t n = 0; n < dim; ++n)
                rho(m, n) += xi[i] * coeff[i][m] * std::conj(coeff[i][n]);
    }

    return entropy_from_eigenvalues(hermitian_eig(rho).eigenvalues);
}

} // namespace holevo
