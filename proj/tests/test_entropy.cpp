#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <holevo/ensemble.hpp>
#include <holevo/entropy.hpp>
#include <holevo/errors.hpp>
#include <holevo/gram.hpp>
#include <holevo/spectral.hpp>

using namespace holevo;
using Catch::Approx;

namespace {

std::vector<double> random_interior_prior(std::size_t M, std::mt19937& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> xi(M);
    double sum = 0.0;
    for (double& x : xi) {
        x = expo(rng);
        sum += x;
    }
    // mix with uniform to stay safely inside the simplex
    for (double& x : xi) x = 0.5 * x / sum + 0.5 / static_cast<double>(M);
    return xi;
}

// Entropy of the prior-weighted Gram in nats, computed WITHOUT the
// sum-to-one renormalization: the homogeneous extension whose partial
// derivatives delta_s_gradient reports.
double raw_entropy_nats(const GramMatrix& g, const std::vector<double>& xi) {
    const std::size_t M = g.size();
    CMatrix a(M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            a(i, j) = std::sqrt(xi[i]) * std::sqrt(xi[j]) * g.entries(i, j);
    double s = 0.0;
    for (double l : hermitian_eig(a).eigenvalues)
        if (l > 1e-300) s -= l * std::log(l);
    return s;
}

} // namespace

TEST_CASE("entropy_from_eigenvalues on a frozen two-level spectrum", "[entropy]") {
    // spectrum ((1+e^-2)/2, (1-e^-2)/2): the uniform-prior BPSK density
    // operator at |alpha|^2 = 1
    const double c = std::exp(-2.0);
    const EntropyValue e = entropy_from_eigenvalues({0.5 * (1.0 + c), 0.5 * (1.0 - c)});
    REQUIRE(e.bits == Approx(0.98674743003965630784).epsilon(1e-15));
    REQUIRE(e.nats == Approx(e.bits * M_LN2).epsilon(1e-15));
}

TEST_CASE("entropy_from_eigenvalues conventions and validation", "[entropy]") {
    SECTION("0 log 0 = 0 and a pure state has zero entropy") {
        const EntropyValue e = entropy_from_eigenvalues({1.0, 0.0, 0.0});
        REQUIRE(e.bits == 0.0);
    }
    SECTION("uniform spectrum gives log2 M bits") {
        const EntropyValue e = entropy_from_eigenvalues({0.25, 0.25, 0.25, 0.25});
        REQUIRE(e.bits == Approx(2.0).epsilon(1e-15));
    }
    SECTION("tiny normalization drift is renormalized away") {
        const EntropyValue a = entropy_from_eigenvalues({0.5, 0.5});
        const EntropyValue b = entropy_from_eigenvalues({0.5 + 2e-7, 0.5 + 2e-7});
        REQUIRE(b.bits == Approx(a.bits).margin(1e-9));
    }
    SECTION("sum far from one is rejected") {
        REQUIRE_THROWS_AS(entropy_from_eigenvalues({0.6, 0.6}), ValidationError);
    }
    SECTION("negative eigenvalue beyond jitter is rejected") {
        REQUIRE_THROWS_AS(entropy_from_eigenvalues({1.0, -1e-8}), ValidationError);
    }
}

TEST_CASE("delta_s of uniform BPSK matches the closed form", "[entropy]") {
    const double a2 = 1.0;
    const EntropyValue e = delta_s(make_psk(2, std::sqrt(a2)), uniform_prior(2));
    REQUIRE(e.bits == Approx(0.98674743003965630784).epsilon(1e-13));
}

TEST_CASE("delta_s is zero on a single state and on coincident states", "[entropy]") {
    REQUIRE(delta_s(make_psk(1, {1.0, 0.0}), uniform_prior(1)).bits == 0.0);
    REQUIRE(delta_s(make_ask3(0.0), uniform_prior(3)).bits == Approx(0.0).margin(1e-12));
}

TEST_CASE("delta_s_gradient matches central finite differences", "[entropy]") {
    std::mt19937 rng(2026u);
    std::uniform_real_distribution<double> amp(-1.4, 1.4);
    const double h = 1e-5;

    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t M = 2 + trial % 5;
        std::vector<ComplexAmplitude> pts(M);
        for (ComplexAmplitude& p : pts) p = {amp(rng), amp(rng)};
        const Constellation c = make_generic(pts);
        const GramMatrix g = gram_of(c);
        const std::vector<double> xi = random_interior_prior(M, rng);

        const std::vector<double> grad = delta_s_gradient(c, PriorVector(xi));
        for (std::size_t i = 0; i < M; ++i) {
            std::vector<double> hi = xi, lo = xi;
            hi[i] += h;
            lo[i] -= h;
            const double fd = (raw_entropy_nats(g, hi) - raw_entropy_nats(g, lo)) / (2.0 * h) /
                              M_LN2;
            REQUIRE(grad[i] == Approx(fd).margin(1e-6 * std::max(1.0, std::abs(grad[i]))));
        }
    }
}

TEST_CASE("delta_s_gradient flags letters outside the support", "[entropy]") {
    // all weight on the vacuum: |alpha> sticks out of the rank-1 support
    const Constellation c = make_generic({{0.0, 0.0}, {1.0, 0.0}});
    const std::vector<double> grad = delta_s_gradient(c, PriorVector({1.0, 0.0}));
    REQUIRE(std::isfinite(grad[0]));
    REQUIRE(std::isinf(grad[1]));
    REQUIRE(grad[1] > 0.0);
}

TEST_CASE("gradient equalizes at the uniform PSK optimum", "[entropy]") {
    const std::vector<double> grad = delta_s_gradient(make_psk(4, 1.0), uniform_prior(4));
    for (std::size_t i = 1; i < 4; ++i) REQUIRE(grad[i] == Approx(grad[0]).margin(1e-11));
}

TEST_CASE("fock_entropy_oracle agrees with the Gram route", "[entropy]") {
    std::mt19937 rng(7u);

    SECTION("3ASK, uniform and random priors") {
        for (double a2 : {0.1, 1.0}) {
            const Constellation c = make_ask3(std::sqrt(a2));
            const std::size_t n_max = fock_nmax_guideline(c);
            const EntropyValue u1 = delta_s(c, uniform_prior(3));
            const EntropyValue u2 = fock_entropy_oracle(c, uniform_prior(3), n_max);
            REQUIRE(u2.bits == Approx(u1.bits).margin(1e-9));

            const PriorVector xi(random_interior_prior(3, rng));
            REQUIRE(fock_entropy_oracle(c, xi, n_max).bits ==
                    Approx(delta_s(c, xi).bits).margin(1e-9));
        }
    }

    SECTION("16QAM at moderate energy") {
        const Constellation c = make_qam16(1.0);
        const std::size_t n_max = fock_nmax_guideline(c);
        REQUIRE(fock_entropy_oracle(c, uniform_prior(16), n_max).bits ==
                Approx(delta_s(c, uniform_prior(16)).bits).margin(1e-9));
    }

    SECTION("undersized truncation is rejected") {
        REQUIRE_THROWS_AS(fock_entropy_oracle(make_qam16(1.0), uniform_prior(16), 8),
                          ValidationError);
    }
}

TEST_CASE("S(rho(xi)) is midpoint concave", "[entropy]") {
    std::mt19937 rng(11u);
    const Constellation c = make_qam16(0.8);
    for (int trial = 0; trial < 50; ++trial) {
        const PriorVector a(random_interior_prior(16, rng));
        const PriorVector b(random_interior_prior(16, rng));
        std::vector<double> mid(16);
        for (std::size_t i = 0; i < 16; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        const double lhs = delta_s(c, PriorVector(mid)).bits;
        const double rhs = 0.5 * (delta_s(c, a).bits + delta_s(c, b).bits);
        REQUIRE(lhs >= rhs - 1e-9);
    }
}
