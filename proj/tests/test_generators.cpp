#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "ttt/chimera.hpp"
#include "ttt/generators.hpp"

using namespace ttt;

namespace {

std::shared_ptr<const WorkingGraph> shared_chimera(int s) {
    return std::make_shared<const WorkingGraph>(build_chimera(s));
}

}  // namespace

TEST_CASE("spec strings parse and round-trip") {
    for (const char* name :
         {"RAN1", "RAN3", "RAN7", "RAN127", "AC3", "AC3-odd", "FL3", "FL7"}) {
        GeneratorSpec spec = GeneratorSpec::parse(name);
        CHECK(spec.to_string() == name);
    }
    GeneratorSpec fl = GeneratorSpec::parse("FL3:a=0.1");
    CHECK(fl.alpha == doctest::Approx(0.1));
    CHECK(fl.to_string() == "FL3:a=0.1");
    CHECK(fl.dir_name() == "FL3_a=0.1");
    CHECK(GeneratorSpec::parse("FL3").alpha == doctest::Approx(0.25));

    CHECK_THROWS_AS(GeneratorSpec::parse("RAN0"), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSpec::parse("AC2"), std::invalid_argument);  // even k
    CHECK_THROWS_AS(GeneratorSpec::parse("AC3-x"), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSpec::parse("FL3:a=0"), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSpec::parse("XYZ"), std::invalid_argument);
    CHECK_THROWS_AS(GeneratorSpec::parse("RAN"), std::invalid_argument);
}

TEST_CASE("RAN1 draws couplings from {-1, +1} with zero fields") {
    auto g = shared_chimera(3);
    GeneratedInstance gi = gen_ran(g, 1, Rng(5));
    CHECK(gi.problem.range == 1);
    CHECK(gi.problem.j.size() == g->num_edges());
    CHECK(gi.problem.h.size() == g->num_active());
    bool saw_plus = false, saw_minus = false;
    for (int32_t j : gi.problem.j) {
        REQUIRE((j == 1 || j == -1));
        (j == 1 ? saw_plus : saw_minus) = true;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
    for (int32_t h : gi.problem.h) CHECK(h == 0);
    CHECK_FALSE(gi.planted_energy.has_value());
}

TEST_CASE("RAN7 couplings are uniform over the 14 nonzero integers") {
    auto g = shared_chimera(8);  // 1472 edges
    std::map<int32_t, int64_t> counts;
    int64_t total = 0;
    for (int rep = 0; rep < 70; ++rep) {
        GeneratedInstance gi = gen_ran(g, 7, Rng(900).child(uint64_t(rep)));
        for (int32_t j : gi.problem.j) {
            REQUIRE(j != 0);
            REQUIRE(std::abs(j) <= 7);
            ++counts[j];
            ++total;
        }
    }
    CHECK(total > 100000);
    CHECK(counts.size() == 14);
    // chi-square against uniform; 13 dof has mean 13, sd sqrt(26)
    double expected = double(total) / 14.0;
    double chi2 = 0.0;
    for (const auto& [value, count] : counts) {
        double d = double(count) - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 40.0);
}

TEST_CASE("AC3 couples cells with unit weights and cell boundaries with 3s") {
    auto g = shared_chimera(3);
    GeneratedInstance gi = gen_ac(g, 3, false, Rng(31));
    CHECK(gi.problem.range == 3);
    const auto& edges = g->edges();
    for (size_t k = 0; k < edges.size(); ++k) {
        bool in_cell = edges[k].first / 8 == edges[k].second / 8;
        CHECK(std::abs(gi.problem.j[k]) == (in_cell ? 1 : 3));
    }
    for (int32_t h : gi.problem.h) CHECK(h == 0);
}

TEST_CASE("AC3-odd places unit fields exactly on even-coupling-sum vertices") {
    auto g = shared_chimera(3);
    GeneratedInstance gi = gen_ac(g, 3, true, Rng(32));
    int fields = 0;
    for (uint32_t c = 0; c < g->num_active(); ++c) {
        int64_t sum = 0;
        for (uint32_t e : g->adj_edge(c)) sum += gi.problem.j[e];
        if (sum % 2 == 0) {
            REQUIRE(std::abs(gi.problem.h[c]) == 1);
            ++fields;
        } else {
            REQUIRE(gi.problem.h[c] == 0);
        }
    }
    // on C3 boundary vertices have odd degree sums available; interior cells
    // with six odd couplings always sum even
    CHECK(fields > 0);
}

TEST_CASE("AC3-odd on C1 fields every vertex") {
    // every C1 vertex has four +-1 couplings: the incident sum is always even
    auto g = shared_chimera(1);
    GeneratedInstance gi = gen_ac(g, 3, true, Rng(33));
    for (int32_t h : gi.problem.h) CHECK(std::abs(h) == 1);
}

TEST_CASE("FL3 plants an all-ones ground state") {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = shared_chimera(trial % 2 == 0 ? 1 : 2);
        GeneratedInstance gi = gen_fl(g, 3, 0.25, rng.child(uint64_t(trial)));
        const IsingProblem& p = gi.problem;
        REQUIRE(gi.planted_energy.has_value());
        REQUIRE(gi.planted_config.has_value());

        // constraint count and coupling bounds
        for (int32_t j : p.j) CHECK(std::abs(j) <= 3);
        for (int32_t h : p.h) CHECK(h == 0);

        // the planted configuration attains the planted energy...
        CHECK(oracles::naive_energy(p, *gi.planted_config) == *gi.planted_energy);
        // ...and it is the exact ground energy
        CHECK(oracles::exact_ground(p) == *gi.planted_energy);
    }
}

TEST_CASE("FL constraint count follows the quarter ratio") {
    auto g12 = std::make_shared<const WorkingGraph>(build_chimera(12));
    // the paper-scale graph: 1097 active vertices -> 274 loops
    Rng rng(72);
    std::vector<uint32_t> defects;
    Rng drng = rng.child(uint64_t(1));
    while (defects.size() < 55) {
        uint32_t d = uint32_t(drng.below(1152));
        bool dup = false;
        for (uint32_t x : defects) dup = dup || x == d;
        if (!dup) defects.push_back(d);
    }
    auto g = std::make_shared<const WorkingGraph>(apply_defects(*g12, defects));
    REQUIRE(g->num_active() == 1097);
    GeneratedInstance gi = gen_fl(g, 3, 0.25, rng);
    // planted energy = sum of (2 - L_j) over 274 loops of length >= 8
    CHECK(*gi.planted_energy <= 274 * (2 - 8));
    // the all-ones configuration evaluates to exactly the planted energy
    CHECK(oracles::naive_energy(gi.problem, *gi.planted_config) == *gi.planted_energy);
    for (int32_t j : gi.problem.j) CHECK(std::abs(j) <= 3);
}

TEST_CASE("FL3 loop energies decompose: planted equals sum of 2 - L") {
    auto g = shared_chimera(2);
    GeneratedInstance gi = gen_fl(g, 3, 0.25, Rng(73));
    // alpha * 32 = 8 loops; each contributes 2 - L <= -6
    CHECK(*gi.planted_energy <= 8 * (2 - 8));
    CHECK(*gi.planted_energy == oracles::naive_energy(gi.problem, *gi.planted_config));
}

TEST_CASE("generate dispatches by spec") {
    auto g = shared_chimera(2);
    Rng rng(74);
    GeneratedInstance ran = generate(g, GeneratorSpec::parse("RAN7"), rng);
    CHECK(ran.problem.range == 7);
    GeneratedInstance ac = generate(g, GeneratorSpec::parse("AC3-odd"), rng);
    CHECK(ac.problem.range == 3);
    GeneratedInstance fl = generate(g, GeneratorSpec::parse("FL3"), rng);
    CHECK(fl.planted_energy.has_value());
}

TEST_CASE("generation is deterministic in the seed") {
    auto g = shared_chimera(2);
    for (const char* name : {"RAN7", "AC3-odd", "FL3"}) {
        GeneratorSpec spec = GeneratorSpec::parse(name);
        GeneratedInstance a = generate(g, spec, Rng(123));
        GeneratedInstance b = generate(g, spec, Rng(123));
        GeneratedInstance c = generate(g, spec, Rng(124));
        CHECK(a.problem.j == b.problem.j);
        CHECK(a.problem.h == b.problem.h);
        CHECK(a.problem.j != c.problem.j);
    }
}
