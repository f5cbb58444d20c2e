#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "ttt/chimera.hpp"
#include "ttt/generators.hpp"
#include "ttt/ising.hpp"

using namespace ttt;

namespace {

std::shared_ptr<const WorkingGraph> shared_chimera(int s) {
    return std::make_shared<const WorkingGraph>(build_chimera(s));
}

IsingProblem ferromagnet_c1() {
    IsingProblem p;
    p.graph = shared_chimera(1);
    p.h.assign(8, 0);
    p.j.assign(16, -1);
    return p;
}

}  // namespace

TEST_CASE("energy worked examples") {
    SUBCASE("C1 ferromagnet, all spins up") {
        IsingProblem p = ferromagnet_c1();
        SpinConfig s(8, 1);
        CHECK(energy(p, s) == -16);
    }
    SUBCASE("two-spin instance by direct substitution") {
        // C1 with all but two vertices removed; one in-cell edge remains
        auto g = std::make_shared<const WorkingGraph>(
            apply_defects(build_chimera(1), {1, 2, 3, 5, 6, 7}));
        REQUIRE(g->num_active() == 2);
        REQUIRE(g->num_edges() == 1);
        IsingProblem p;
        p.graph = g;
        p.h = {1, -1};
        p.j = {1};
        SpinConfig s = {-1, 1};
        // 1*(-1) + (-1)*(1) + 1*(-1*1) = -3
        CHECK(energy(p, s) == -3);
    }
    SUBCASE("shape mismatch throws") {
        IsingProblem p = ferromagnet_c1();
        SpinConfig bad(7, 1);
        CHECK_THROWS_AS(energy(p, bad), std::invalid_argument);
    }
}

TEST_CASE("energy agrees with the naive oracle on random instances") {
    auto g = shared_chimera(2);
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        IsingProblem p = gen_ran(g, 7, rng.child(uint64_t(trial))).problem;
        Rng crng = rng.child(uint64_t(1000 + trial));
        for (int i = 0; i < 100; ++i) {
            SpinConfig s = random_config(*g, crng);
            CHECK(energy(p, s) == oracles::naive_energy(p, s));
        }
    }
}

TEST_CASE("gauge transform identities") {
    auto g = shared_chimera(2);
    Rng rng(55);
    IsingProblem p = gen_ran(g, 3, rng.child(uint64_t(0))).problem;

    SUBCASE("all +1 gauge is the identity") {
        GaugeTransform id(g->num_active(), 1);
        IsingProblem q = apply_gauge(p, id);
        CHECK(q.h == p.h);
        CHECK(q.j == p.j);
    }
    SUBCASE("all -1 gauge negates fields, keeps couplings") {
        IsingProblem pf = p;
        Rng hr = rng.child(uint64_t(7));
        for (auto& h : pf.h) h = int32_t(hr.below(7)) - 3;
        GaugeTransform flip(g->num_active(), -1);
        IsingProblem q = apply_gauge(pf, flip);
        CHECK(q.j == pf.j);
        for (size_t i = 0; i < q.h.size(); ++i) CHECK(q.h[i] == -pf.h[i]);
    }
    SUBCASE("energy invariance on 1000 random triples") {
        Rng trial_rng = rng.child(uint64_t(2));
        for (int i = 0; i < 1000; ++i) {
            Rng r = trial_rng.child(uint64_t(i));
            IsingProblem pi = gen_ran(g, 1 + int(r.below(7)), r).problem;
            GaugeTransform t = random_gauge(*g, r);
            SpinConfig s = random_config(*g, r);
            CHECK(energy(apply_gauge(pi, t), compose(t, s)) == energy(pi, s));
        }
    }
    SUBCASE("gauges compose involutively") {
        Rng r = rng.child(uint64_t(3));
        GaugeTransform t = random_gauge(*g, r);
        IsingProblem q = apply_gauge(apply_gauge(p, t), t);
        CHECK(q.h == p.h);
        CHECK(q.j == p.j);
    }
}

TEST_CASE("global flip symmetry at zero fields") {
    auto g = shared_chimera(2);
    Rng rng(66);
    IsingProblem p = gen_ran(g, 5, rng).problem;  // h = 0 by construction
    for (int i = 0; i < 50; ++i) {
        SpinConfig s = random_config(*g, rng);
        SpinConfig flipped = s;
        for (auto& v : flipped) v = int8_t(-v);
        CHECK(energy(p, s) == energy(p, flipped));
    }
}

TEST_CASE("greedy descent reaches 1-flip minima and never ascends") {
    auto g = shared_chimera(2);
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        Rng r = rng.child(uint64_t(i));
        IsingProblem p = gen_ran(g, 1 + int(r.below(7)), r).problem;
        SpinConfig s = random_config(*g, r);
        SpinConfig t = greedy_descent(p, s);
        CHECK(energy(p, t) <= energy(p, s));
        CHECK(oracles::one_flip_minimal(p, t));
        CHECK(greedy_descent(p, t) == t);  // idempotent
    }
}

TEST_CASE("greedy descent on the C1 ferromagnet") {
    // E = -(sum of V spins)(sum of H spins), so the landscape has exactly two
    // kinds of 1-flip minima: the fully aligned ground states at -16, and the
    // doubly balanced zero-energy plateau where every single flip is a tie.
    IsingProblem p = ferromagnet_c1();
    SpinConfig arg;
    int64_t ground = oracles::brute_force_ground(p, &arg);
    CHECK(ground == -16);
    int plateau_starts = 0;
    for (int i = 0; i < 256; ++i) {
        SpinConfig s(8);
        for (int b = 0; b < 8; ++b) s[size_t(b)] = (i >> b) & 1 ? int8_t(-1) : int8_t(1);
        int sum_v = s[0] + s[1] + s[2] + s[3];
        int sum_h = s[4] + s[5] + s[6] + s[7];
        SpinConfig t = greedy_descent(p, s);
        CHECK(oracles::one_flip_minimal(p, t));
        if (sum_v == 0 && sum_h == 0) {
            // ties never flip: the balanced start is already a fixed point
            ++plateau_starts;
            CHECK(t == s);
            CHECK(energy(p, t) == 0);
        } else {
            CHECK(energy(p, t) == -16);
        }
    }
    CHECK(plateau_starts == 36);  // C(4,2)^2 doubly balanced configurations
}

namespace {

// flip_delta must match the naive energy difference everywhere
bool flip_deltas_consistent(const CouplingTable& t, const SpinConfig& s,
                            const IsingProblem& p) {
    int64_t base = oracles::naive_energy(p, s);
    SpinConfig u = s;
    for (uint32_t i = 0; i < t.num_spins(); ++i) {
        u[i] = int8_t(-u[i]);
        int64_t diff = oracles::naive_energy(p, u) - base;
        u[i] = int8_t(-u[i]);
        if (flip_delta(t, s, i) != diff) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("coupling table mirrors the problem") {
    auto g = shared_chimera(2);
    Rng rng(99);
    GeneratedInstance gi = gen_ac(g, 3, true, rng);
    const IsingProblem& p = gi.problem;
    CouplingTable t = make_coupling_table(p);
    CHECK(t.num_spins() == p.num_spins());
    for (int i = 0; i < 200; ++i) {
        SpinConfig s = random_config(*g, rng);
        CHECK(flip_deltas_consistent(t, s, p));
    }
}

TEST_CASE("greedy_descent_inplace matches greedy_descent") {
    auto g = shared_chimera(2);
    Rng rng(111);
    IsingProblem p = gen_ran(g, 3, rng).problem;
    CouplingTable t = make_coupling_table(p);
    for (int i = 0; i < 100; ++i) {
        SpinConfig s = random_config(*g, rng);
        SpinConfig a = greedy_descent(p, s);
        SpinConfig b = s;
        greedy_descent_inplace(t, b);
        CHECK(a == b);
    }
}
