#include "ttt/timing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ttt/solvers/hfs.hpp"
#include "ttt/solvers/multispin.hpp"
#include "ttt/solvers/sa.hpp"

namespace ttt {

namespace {
// Keeps measured work observable so the optimizer cannot drop it.
volatile uint64_t g_timing_sink = 0;
}  // namespace

int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int64_t timer_resolution_ns() {
    static const int64_t cached = [] {
        int64_t best = std::numeric_limits<int64_t>::max();
        for (int trial = 0; trial < 9; ++trial) {
            int64_t a = now_ns();
            int64_t b;
            do {
                b = now_ns();
            } while (b == a);
            best = std::min(best, b - a);
        }
        return std::max<int64_t>(best, 1);
    }();
    return cached;
}

double measure_per_unit_ns(const MeasureSpec& spec,
                           const std::function<void(int64_t)>& fn) {
    const int64_t floor_ns =
        std::max(spec.min_total_ns, 100 * timer_resolution_ns());
    int64_t units = std::max<int64_t>(spec.min_units, 1);
    for (;;) {
        int64_t t0 = now_ns();
        fn(units);
        int64_t elapsed = now_ns() - t0;
        if (elapsed >= floor_ns) return double(elapsed) / double(units);
        if (units > spec.max_units / 2)
            throw std::runtime_error(
                "timer resolution too coarse: the measured interval stayed "
                "below the floor at the maximum batch size");
        units *= 2;
    }
}

int64_t measure_min_ns(int reps, const std::function<void()>& fn) {
    if (reps < 1) throw std::invalid_argument("rep count must be >= 1");
    int64_t best = std::numeric_limits<int64_t>::max();
    for (int i = 0; i < reps; ++i) {
        int64_t t0 = now_ns();
        fn();
        best = std::min(best, now_ns() - t0);
    }
    return std::max<int64_t>(best, 1);
}

SolverTimings calibrate(const IsingProblem& p, int64_t sa_min_sweeps) {
    SolverTimings out;
    Rng rng(0x7a1b5u);

    out.sa_init_ns = measure_min_ns(10, [&] {
        CouplingTable t = make_coupling_table(p);
        g_timing_sink = g_timing_sink + t.offset.back();
    });

    {
        CouplingTable table = make_coupling_table(p);
        SpinConfig s = random_config(*p.graph, rng);
        MeasureSpec spec;
        spec.min_units = sa_min_sweeps;
        out.sa_sweep_ns = measure_per_unit_ns(spec, [&](int64_t units) {
            SAParams params;
            params.sweeps = int(std::min<int64_t>(units, 1 << 30));
            sa_anneal(table, params, p.range, rng, s);
            g_timing_sink = g_timing_sink + uint64_t(uint8_t(s[0]));
        });
    }

    bool msa_ok = p.range == 1;
    for (int32_t h : p.h) msa_ok = msa_ok && h == 0;
    for (int32_t j : p.j) msa_ok = msa_ok && (j == 1 || j == -1);
    if (msa_ok) {
        out.msa_init_ns =
            measure_min_ns(10, [&] { g_timing_sink = g_timing_sink + msa_init_probe(p); });
        MeasureSpec spec;
        spec.min_units = 1000;
        out.msa_word_sweep_ns = measure_per_unit_ns(
            spec, [&](int64_t units) { msa_sweep_probe(p, units, rng); });
    }

    out.hfs_init_ns = measure_min_ns(10, [&] {
        HfsState st = make_hfs_state(p);
        g_timing_sink = g_timing_sink + st.cg.nodes.size() + st.pair_tables.size();
    });
    {
        HfsState st = make_hfs_state(p);
        SpinConfig s = random_config(*p.graph, rng);
        MeasureSpec spec;
        spec.min_units = 1000;
        out.hfs_tree_sweep_ns = measure_per_unit_ns(spec, [&](int64_t units) {
            for (int64_t i = 0; i < units; ++i) {
                std::vector<uint32_t> tree = draw_maximal_tree(st.cg, rng);
                optimize_tree(p, st, tree, s);
                g_timing_sink = g_timing_sink + uint64_t(table_energy(st.table, s));
            }
        });
    }
    return out;
}

TimingModel sa_timing(const SolverTimings& t, int sweeps) {
    return TimingModel{t.sa_init_ns, llround(t.sa_sweep_ns * double(sweeps)), 0};
}

TimingModel msa_timing(const SolverTimings& t, int sweeps) {
    return TimingModel{
        t.msa_init_ns,
        llround(t.msa_word_sweep_ns * double(sweeps) / double(kMsaWordWidth)), 0};
}

TimingModel hfs_timing(const SolverTimings& t, double mean_tree_sweeps) {
    return TimingModel{t.hfs_init_ns, llround(t.hfs_tree_sweep_ns * mean_tree_sweeps),
                       0};
}

}  // namespace ttt
