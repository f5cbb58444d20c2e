#pragma once

#include <cstdint>
#include <functional>

#include "ttt/ising.hpp"
#include "ttt/sample.hpp"

namespace ttt {

// Monotonic wall clock in integer nanoseconds.
int64_t now_ns();

// Smallest observable positive clock increment, measured once and cached.
int64_t timer_resolution_ns();

// Batched mean-cost measurement. fn(units) must perform `units` repetitions
// of the work; the batch doubles until the measured interval reaches both
// min_total_ns and 100x the timer resolution, then the mean ns per unit is
// returned. Throws std::runtime_error if max_units is exceeded first (timer
// resolution too coarse for the work being measured).
struct MeasureSpec {
    int64_t min_units = 1;
    int64_t min_total_ns = 50'000'000;
    int64_t max_units = int64_t(1) << 30;
};

double measure_per_unit_ns(const MeasureSpec& spec,
                           const std::function<void(int64_t)>& fn);

// Minimum over `reps` single-shot timings (the initialization rule: time the
// setup 10 times, keep the minimum). Clamped below by 1 ns.
int64_t measure_min_ns(int reps, const std::function<void()>& fn);

// Measured per-instance software timing constants, nanoseconds. A sweep
// covers all spins once; an msa word sweep advances all 64 replicas; an hfs
// tree sweep is one maximal-tree draw plus its conditional optimization.
struct SolverTimings {
    int64_t sa_init_ns = 0;
    double sa_sweep_ns = 0.0;
    int64_t msa_init_ns = 0;        // 0 when the instance does not qualify
    double msa_word_sweep_ns = 0.0;
    int64_t hfs_init_ns = 0;
    double hfs_tree_sweep_ns = 0.0;
};

// Full calibration on one instance. Run exclusively: concurrent work on the
// core invalidates the numbers. The multispin parts are measured only when
// the instance qualifies (range 1, no fields). SA per-sweep cost is averaged
// over at least sa_min_sweeps sweeps.
SolverTimings calibrate(const IsingProblem& p, int64_t sa_min_sweeps = 100'000);

// Software TimingModels derived from calibration (t_r = 0 throughout).
// The per-sample msa anneal cost is the word sweep amortized over its 64
// replicas. HFS needs the mean tree sweeps per sample, observed at run time.
TimingModel sa_timing(const SolverTimings& t, int sweeps);
TimingModel msa_timing(const SolverTimings& t, int sweeps);
TimingModel hfs_timing(const SolverTimings& t, double mean_tree_sweeps);

}  // namespace ttt
