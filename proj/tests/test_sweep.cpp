#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include <holevo/capacity.hpp>
#include <holevo/errors.hpp>
#include <holevo/sweep.hpp>

using namespace holevo;
using Catch::Approx;

namespace {

SweepSpec make_spec(SweepKind kind, double lo, double hi, std::size_t points) {
    SweepSpec s;
    s.kind = kind;
    s.alpha_sq_min = lo;
    s.alpha_sq_max = hi;
    s.points = points;
    return s;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<double> fields_of(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

std::string sweep_to_string(const SweepSpec& spec) {
    std::ostringstream out;
    run_sweep(spec, out);
    return out.str();
}

} // namespace

TEST_CASE("validate_sweep enforces the spec invariants", "[sweep]") {
    REQUIRE_NOTHROW(validate_sweep(make_spec(SweepKind::ASK3, 0.0, 2.0, 11)));
    REQUIRE_THROWS_AS(validate_sweep(make_spec(SweepKind::ASK3, 2.0, 1.0, 11)), ValidationError);
    REQUIRE_THROWS_AS(validate_sweep(make_spec(SweepKind::ASK3, -0.1, 1.0, 11)), ValidationError);
    REQUIRE_THROWS_AS(validate_sweep(make_spec(SweepKind::ASK3, 0.0, 1.0, 0)), ValidationError);

    SweepSpec log_spec = make_spec(SweepKind::PSK, 0.0, 1.0, 5);
    log_spec.scale = SweepScale::LOG;
    REQUIRE_THROWS_AS(validate_sweep(log_spec), ValidationError);
    log_spec.alpha_sq_min = 0.01;
    REQUIRE_NOTHROW(validate_sweep(log_spec));

    // 16QAM excludes zero energy
    REQUIRE_THROWS_AS(validate_sweep(make_spec(SweepKind::QAM16, 0.0, 1.0, 3)), ValidationError);
}

TEST_CASE("sweep_grid spacing", "[sweep]") {
    SECTION("linear endpoints and step") {
        const std::vector<double> g = sweep_grid(make_spec(SweepKind::ASK3, 0.0, 2.0, 5));
        REQUIRE(g == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    }
    SECTION("log scale is geometric") {
        SweepSpec s = make_spec(SweepKind::PSK, 0.01, 1.0, 3);
        s.scale = SweepScale::LOG;
        const std::vector<double> g = sweep_grid(s);
        REQUIRE(g[0] == Approx(0.01));
        REQUIRE(g[1] == Approx(0.1));
        REQUIRE(g[2] == Approx(1.0));
    }
    SECTION("single point collapses to the minimum") {
        REQUIRE(sweep_grid(make_spec(SweepKind::ASK3, 0.7, 2.0, 1)) ==
                std::vector<double>{0.7});
    }
}

TEST_CASE("psk sweep emits the documented columns", "[sweep]") {
    SweepSpec s = make_spec(SweepKind::PSK, 0.5, 1.5, 3);
    s.M = 2;
    const std::vector<std::string> lines = lines_of(sweep_to_string(s));
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0] == "alpha_sq,capacity_bits,iterations");

    const std::vector<double> mid = fields_of(lines[2]);
    REQUIRE(mid.size() == 3);
    REQUIRE(mid[0] == Approx(1.0));
    REQUIRE(mid[1] == Approx(symmetric_capacity(make_psk(2, 1.0)).capacity_bits).margin(1e-11));
    REQUIRE(mid[2] == 0.0);
}

TEST_CASE("ask3 sweep reproduces the activation picture", "[sweep]") {
    const std::string csv = sweep_to_string(make_spec(SweepKind::ASK3, 0.0, 2.0, 51));
    const std::vector<std::string> lines = lines_of(csv);
    REQUIRE(lines.size() == 52);
    REQUIRE(lines[0] == "alpha_sq,capacity_bits,xi1,iterations");

    // zero-energy row carries no information
    const std::vector<double> first = fields_of(lines[1]);
    REQUIRE(first[0] == 0.0);
    REQUIRE(first[1] == Approx(0.0).margin(1e-9));

    // the first row whose xi1 exceeds 1e-6 sits at the activation knee
    double knee = -1.0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const std::vector<double> row = fields_of(lines[k]);
        if (row[2] > 1e-6) {
            knee = row[0];
            break;
        }
    }
    REQUIRE(knee == Approx(0.21).margin(0.03));
}

TEST_CASE("qam16 sweep emits the reduced prior columns", "[sweep]") {
    const std::string csv = sweep_to_string(make_spec(SweepKind::QAM16, 0.5, 1.0, 2));
    const std::vector<std::string> lines = lines_of(csv);
    REQUIRE(lines[0] == "alpha_sq,capacity_bits,xi1,xi2,xi3,iterations");
    const std::vector<double> last = fields_of(lines[2]);
    REQUIRE(last.size() == 6);
    REQUIRE(last[0] == Approx(1.0));
    REQUIRE(last[1] == Approx(3.95843339597).margin(1e-8));
    // expanded prior normalizes: 4*xi1 + 8*xi2 + 4*xi3 = 1
    REQUIRE(4.0 * last[2] + 8.0 * last[3] + 4.0 * last[4] == Approx(1.0).margin(1e-9));
}

TEST_CASE("sweep output is deterministic and thread-count independent", "[sweep]") {
    SweepSpec s = make_spec(SweepKind::ASK3, 0.1, 1.1, 9);
    s.jobs = 1;
    const std::string serial = sweep_to_string(s);
    s.jobs = 4;
    const std::string parallel = sweep_to_string(s);
    REQUIRE(serial == parallel);
    REQUIRE(serial == sweep_to_string(s));
}

TEST_CASE("run_threshold locates the 3ASK activation", "[sweep]") {
    const ThresholdResult t = run_threshold(SweepKind::ASK3, ThresholdParam::XI1);
    REQUIRE(t.alpha_sq == Approx(0.21).margin(0.03));
    REQUIRE(t.width <= 1e-4);
    REQUIRE(t.evaluations > 10);
}

TEST_CASE("run_threshold validates its parameter pair", "[sweep]") {
    REQUIRE_THROWS_AS(run_threshold(SweepKind::PSK, ThresholdParam::XI1), ValidationError);
    REQUIRE_THROWS_AS(run_threshold(SweepKind::ASK3, ThresholdParam::XI2), ValidationError);
}
