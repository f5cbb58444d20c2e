// Tests for the measurement utilities and per-instance calibration: clock
// sanity, batched mean-cost measurement with its resolution guard, and the
// arithmetic that turns measured constants into solver timing models.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdint>
#include <memory>

#include "ttt/chimera.hpp"
#include "ttt/generators.hpp"
#include "ttt/rng.hpp"
#include "ttt/timing.hpp"

using namespace ttt;

namespace {
volatile uint64_t sink = 0;
}

TEST_CASE("clock sanity") {
    int64_t a = now_ns();
    for (int i = 0; i < 100000; ++i) sink = sink + 1;
    int64_t b = now_ns();
    CHECK(b >= a);
    CHECK(now_ns() >= b);

    int64_t res = timer_resolution_ns();
    CHECK(res >= 1);
    CHECK(timer_resolution_ns() == res);  // cached
}

TEST_CASE("batched mean-cost measurement") {
    SUBCASE("per-unit cost of a small busy loop") {
        MeasureSpec spec;
        spec.min_total_ns = 1'000'000;  // keep the test quick
        int64_t calls = 0;
        double per_unit = measure_per_unit_ns(spec, [&](int64_t units) {
            ++calls;
            for (int64_t i = 0; i < units; ++i) sink = sink + 1;
        });
        CHECK(per_unit > 0.0);
        CHECK(per_unit < 1e6);  // a single increment is nowhere near a millisecond
        CHECK(calls >= 1);
    }

    SUBCASE("honours min_units") {
        MeasureSpec spec;
        spec.min_units = 4096;
        spec.min_total_ns = 1'000'000;
        int64_t first = 0;
        measure_per_unit_ns(spec, [&](int64_t units) {
            if (first == 0) first = units;
            for (int64_t i = 0; i < units; ++i) sink = sink + 1;
        });
        CHECK(first == 4096);
    }

    SUBCASE("throws when the work never reaches the floor") {
        MeasureSpec spec;
        spec.max_units = 4;
        CHECK_THROWS_WITH_AS(measure_per_unit_ns(spec, [](int64_t) {}),
                             doctest::Contains("timer resolution too coarse"),
                             std::runtime_error);
    }
}

TEST_CASE("minimum-of-reps measurement") {
    int64_t v = measure_min_ns(10, [] {
        for (int i = 0; i < 1000; ++i) sink = sink + 1;
    });
    CHECK(v >= 1);
    int64_t noop = measure_min_ns(3, [] {});
    CHECK(noop >= 1);  // clamped below by 1 ns
    CHECK_THROWS_AS(measure_min_ns(0, [] {}), std::invalid_argument);
}

TEST_CASE("instance calibration") {
    auto g = std::make_shared<WorkingGraph>(build_chimera(1));

    SUBCASE("qualifying instance measures all three solvers") {
        IsingProblem p = gen_ran(g, 1, Rng(4).child("cal")).problem;
        SolverTimings t = calibrate(p, 2000);
        CHECK(t.sa_init_ns >= 1);
        CHECK(t.sa_sweep_ns > 0.0);
        CHECK(t.msa_init_ns >= 1);
        CHECK(t.msa_word_sweep_ns > 0.0);
        CHECK(t.hfs_init_ns >= 1);
        CHECK(t.hfs_tree_sweep_ns > 0.0);
        // a word sweep advances 64 replicas; it costs more than nothing but
        // has no business costing more than a millisecond on 8 spins
        CHECK(t.msa_word_sweep_ns < 1e6);
    }

    SUBCASE("non-qualifying instance leaves the multispin constants at zero") {
        IsingProblem p = gen_ran(g, 3, Rng(4).child("cal3")).problem;
        SolverTimings t = calibrate(p, 2000);
        CHECK(t.sa_sweep_ns > 0.0);
        CHECK(t.msa_init_ns == 0);
        CHECK(t.msa_word_sweep_ns == 0.0);
        CHECK(t.hfs_tree_sweep_ns > 0.0);
    }
}

TEST_CASE("timing models from measured constants") {
    SolverTimings t;
    t.sa_init_ns = 1000;
    t.sa_sweep_ns = 2.5;
    t.msa_init_ns = 500;
    t.msa_word_sweep_ns = 64.7;
    t.hfs_init_ns = 2000;
    t.hfs_tree_sweep_ns = 100.4;

    TimingModel sa = sa_timing(t, 100);
    CHECK(sa.t_i_ns == 1000);
    CHECK(sa.t_a_ns == 250);
    CHECK(sa.t_r_ns == 0);
    CHECK(sa.t_s_ns() == 250);

    // per-sample cost amortizes the word sweep over the 64 replicas
    TimingModel msa = msa_timing(t, 128);
    CHECK(msa.t_i_ns == 500);
    CHECK(msa.t_a_ns == 129);  // llround(64.7 * 128 / 64)
    CHECK(msa.t_r_ns == 0);

    TimingModel hfs = hfs_timing(t, 12.5);
    CHECK(hfs.t_i_ns == 2000);
    CHECK(hfs.t_a_ns == 1255);  // llround(100.4 * 12.5)
    CHECK(hfs.t_r_ns == 0);

    // totals follow T = t_i + R * t_s
    CHECK(sa.total_ns(10) == 1000 + 2500);
}
