#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <holevo/ensemble.hpp>
#include <holevo/errors.hpp>
#include <holevo/gram.hpp>

using namespace holevo;
using Catch::Approx;

TEST_CASE("coherent_overlap matches the closed form", "[gram]") {
    const ComplexAmplitude b(0.4, -0.2), g(1.1, 0.7);
    const cplx got = coherent_overlap(b, g);
    const cplx want = std::exp(-0.5 * std::norm(b) - 0.5 * std::norm(g) + std::conj(b) * g);
    REQUIRE(std::abs(got - want) < 1e-15);

    SECTION("vacuum overlap is kappa = exp(-|alpha|^2/2)") {
        const double a2 = 1.7;
        const cplx k = coherent_overlap({0.0, 0.0}, {std::sqrt(a2), 0.0});
        REQUIRE(k.real() == Approx(std::exp(-0.5 * a2)).epsilon(1e-14));
        REQUIRE(k.imag() == 0.0);
    }

    SECTION("antipodal overlap is kappa^4 = exp(-2|alpha|^2)") {
        const double a = 0.9;
        const cplx v = coherent_overlap({a, 0.0}, {-a, 0.0});
        REQUIRE(v.real() == Approx(std::exp(-2.0 * a * a)).epsilon(1e-14));
    }

    SECTION("is Hermitian under argument swap") {
        REQUIRE(std::abs(coherent_overlap(g, b) - std::conj(got)) < 1e-15);
    }

    SECTION("coincident states overlap to 1") {
        REQUIRE(std::abs(coherent_overlap(g, g) - cplx(1.0, 0.0)) < 1e-15);
    }

    REQUIRE_THROWS_AS(coherent_overlap({std::nan(""), 0.0}, {0.0, 0.0}), ValidationError);
}

TEST_CASE("gram_of builds a unit-diagonal Hermitian matrix", "[gram]") {
    const Constellation c = make_psk(5, {0.9, 0.4});
    const GramMatrix g = gram_of(c);
    REQUIRE(g.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) REQUIRE(g.entries(i, i) == cplx(1.0, 0.0));
    REQUIRE(hermiticity_defect(g.entries) == 0.0);
    REQUIRE_NOTHROW(validate_gram_structure(g.entries));

    // spot-check one off-diagonal against the overlap function
    REQUIRE(std::abs(g.entries(1, 3) - coherent_overlap(c.amplitudes[1], c.amplitudes[3])) <
            1e-15);
}

TEST_CASE("validate_gram_structure rejects structural violations", "[gram]") {
    CMatrix g = CMatrix::identity(2);

    SECTION("non-unit diagonal, naming the entry") {
        g(1, 1) = 0.9;
        try {
            validate_gram_structure(g);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            REQUIRE(std::string(e.what()).find("(2,2)") != std::string::npos);
        }
    }

    SECTION("non-Hermitian off-diagonal") {
        g(0, 1) = cplx(0.5, 0.0);
        g(1, 0) = cplx(0.4, 0.0);
        REQUIRE_THROWS_AS(validate_gram_structure(g), ValidationError);
    }

    SECTION("empty matrix") {
        REQUIRE_THROWS_AS(validate_gram_structure(CMatrix(0)), ValidationError);
    }
}

TEST_CASE("weighted_gram scales rows and columns by sqrt(xi)", "[gram]") {
    const Constellation c = make_ask3(1.0);
    const GramMatrix g = gram_of(c);
    const PriorVector xi({0.5, 0.3, 0.2});
    const WeightedGram a = weighted_gram(g, xi);

    double trace = 0.0;
    for (std::size_t i = 0; i < 3; ++i) trace += a.entries(i, i).real();
    REQUIRE(trace == Approx(1.0).epsilon(1e-14));

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const cplx want = std::sqrt(xi[i] * xi[j]) * g.entries(i, j);
            REQUIRE(std::abs(a.entries(i, j) - want) < 1e-14);
        }

    SECTION("zero prior components zero out the slice") {
        const WeightedGram b = weighted_gram(g, PriorVector({0.0, 0.6, 0.4}));
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(b.entries(0, j) == cplx(0.0, 0.0));
    }

    REQUIRE_THROWS_AS(weighted_gram(g, PriorVector({0.5, 0.5})), ValidationError);
}
