#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace holevo {

// Negative eigenvalues above this magnitude are numerical noise and get
// clamped to zero; anything below it signals a genuinely non-PSD input.
inline constexpr double kEigClampTol = 1e-10;

struct Spectrum {
    std::vector<double> eigenvalues; // descending
    CMatrix eigenvectors;            // unitary; column j pairs with eigenvalues[j]
};

// Full eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
// rotations. Adequate and simply verifiable at the dimensions this
// library meets (M <= 16 Gram matrices, <~100 for the Fock-basis test
// oracle); quadratically convergent once the off-diagonal mass is small.
inline Spectrum hermitian_eig(const CMatrix& input) {
    const std::size_t n = input.size();
    if (n == 0) throw ValidationError("hermitian_eig: empty matrix");

    const double fro = frobenius_norm(input);
    if (hermiticity_defect(input) > 1e-12 * std::max(1.0, fro))
        throw ValidationError("hermitian_eig: matrix is not Hermitian within tolerance");

    // Work on the symmetrized copy (A + A^dagger)/2.
    CMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
    CMatrix v = CMatrix::identity(n);

    const double stop_tol = 1e-13 * fro;  // Frobenius norm is rotation-invariant
    const double skip_tol = 1e-18 * fro;
    const int max_sweeps = 100;

    bool converged = (off_diagonal_norm(a) <= stop_tol) || n == 1 || fro == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double m = std::abs(a(p, q));
                if (m <= skip_tol) continue;

                // Phase w makes the 2x2 block real; then the classic
                // smaller-angle Jacobi choice diagonalizes it.
                const cplx w = a(p, q) / m;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * m);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sw = s * w;
                const cplx swc = s * std::conj(w);

                // A <- U^dagger A U with the unitary U = I except
                // U[p][p] = c, U[p][q] = s*w, U[q][p] = -s*conj(w), U[q][q] = c.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx x = a(i, p), y = a(i, q);
                    a(i, p) = c * x - swc * y;
                    a(i, q) = sw * x + c * y;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx x = a(p, j), y = a(q, j);
                    a(p, j) = c * x - sw * y;
                    a(q, j) = swc * x + c * y;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx x = v(i, p), y = v(i, q);
                    v(i, p) = c * x - swc * y;
                    v(i, q) = sw * x + c * y;
                }
            }
        }
        converged = off_diagonal_norm(a) <= stop_tol;
    }
    if (!converged)
        throw NumericalError("hermitian_eig: Jacobi sweeps did not converge within cap");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    Spectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors = CMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        spec.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, j) = v(i, order[j]);
    }
    return spec;
}

// Clamp a density-operator spectrum: values in (-1e-10, 0) are noise and
// become 0; anything below -1e-10 means the input was not PSD.
inline std::vector<double> clamp_density_spectrum(std::vector<double> lambdas) {
    for (double& l : lambdas) {
        if (l < -kEigClampTol)
            throw ValidationError("spectrum has negative eigenvalue " + std::to_string(l) +
                                  " beyond clamp tolerance; input is not PSD");
        if (l < 0.0) l = 0.0;
    }
    return lambdas;
}

// Eigenvalues of the uniform-prior weighted Gram of a symmetric
// constellation, via the DFT of its circulant first row:
//   lambda_j = (1/M) * sum_k c_k exp(-2*pi*i*j*k/M),
// where c_k = <psi_0|psi_k> is the raw overlap row (c_0 = 1). The DFT is
// computed directly; no FFT needed at these sizes.
inline std::vector<double> circulant_eigenvalues(const std::vector<cplx>& first_row) {
    const std::size_t M = first_row.size();
    if (M == 0) throw ValidationError("circulant_eigenvalues: empty row");

    for (std::size_t k = 0; k < M; ++k) {
        const cplx mirrored = first_row[(M - k) % M];
        if (std::abs(mirrored - std::conj(first_row[k])) > 1e-12)
            throw ValidationError(
                "circulant_eigenvalues: row fails conjugate symmetry c[M-k] = conj(c[k])");
    }

    std::vector<double> lambdas(M);
    for (std::size_t j = 0; j < M; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const double phase =
                -2.0 * M_PI * static_cast<double>(j) * static_cast<double>(k) /
                static_cast<double>(M);
            acc += first_row[k] * std::polar(1.0, phase);
        }
        lambdas[j] = acc.real() / static_cast<double>(M);
    }
    return clamp_density_spectrum(std::move(lambdas));
}

} // namespace holevo
