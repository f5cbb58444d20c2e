#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ttt/sample.hpp"

namespace ttt {

// Target energy at quantile q of a reference sample distribution: the
// element at 1-based index k = max(1, round_half_up(q*N)) of the ascending
// energy sort.
struct TargetSpec {
    double q = 0.0;
    int64_t e_q = 0;
};

TargetSpec target_energy(const SampleSet& ref, double q);

// Success counts and derived STT/TTT for one solver parameterization scored
// against one target. Counts are kept as exact integers; derived
// probabilities and times are computed from them on demand so the record
// stays bit-stable. A censored record (no sample reached the target) carries
// lower bounds computed as if the (N+1)-th sample had succeeded once.
struct SolverStats {
    std::string solver_id;
    double q = 0.0;
    int64_t target = 0;
    int64_t n = 0;
    int64_t successes = 0;
    int64_t gb_n = 1;          // gauge batches scored / containing a success;
    int64_t gb_successes = 1;  // (1, 1) for software solvers by definition
    bool censored = false;
    int64_t sweeps = 0;        // parameterization hint used by portfolio ties
    int64_t ttt_anneal_ns = -1;  // -1 until ttt() has been applied
    int64_t ttt_total_ns = -1;

    double p_t_hat() const {
        return n > 0 ? double(successes) / double(n) : 0.0;
    }
    double p_g_hat() const {
        return gb_n > 0 ? double(gb_successes) / double(gb_n) : 1.0;
    }
    // Expected samples to target, 1/p_t_hat. For censored records this is
    // the lower bound N (display it as "> N").
    double stt() const {
        return censored ? double(n) : double(n) / double(successes);
    }
    std::string stt_display() const;
};

// p_t_hat, successes, censoring, and gauge-batch counts from a sample set.
SolverStats stt(const SampleSet& samples, const TargetSpec& t);

// Fraction of gauge batches containing at least one success. Sets without
// batch structure score 1 by definition unless require_batches is set.
double gauge_success(const SampleSet& samples, const TargetSpec& t,
                     bool require_batches = false);

// TTT_anneal = t_a / p_t_hat; TTT_total = t_i / p_g_hat + (t_a + t_r) / p_t_hat.
// Computed in exact integer arithmetic (round half up per term). Censored
// inputs yield censored outputs holding the successes=1 lower bounds.
SolverStats ttt(SolverStats stats, const TimingModel& timing);

// Published single-thread timing constants of an external solver, used to
// re-cost in-house STT results.
struct ExternalTiming {
    std::string id;
    int64_t t_i_ns = 0;
    double spin_flip_ns = 0.0;
    int batch_width = 1;  // replicas produced per run; >1 enables batch bookkeeping
};

// Single-spin general-coupling annealer with fields: 69 ms init, 3.33 ns per
// spin flip, unbatched.
inline ExternalTiming an_ss_ge_fi() { return {"an_ss_ge_fi", 69'000'000, 3.33, 1}; }
// Multi-spin range-1 no-field annealer: 0.6 ms init, 0.15 ns per spin flip,
// 64 replicas per batch.
inline ExternalTiming an_ms_r1_nf() { return {"an_ms_r1_nf", 600'000, 0.15, 64}; }

// Probability that a batch of w independent samples contains a success.
double batch_success(double p_t_hat, int w);

// Re-cost stats measured in-house with an external solver's published
// timings: per-sample anneal time = sweeps * n_active * spin_flip_ns, t_r = 0,
// p_g = 1. With batch_width w > 1, the per-run success probability becomes
// 1 - (1 - p_t_hat)^w and the per-run anneal time w times the per-sample one.
SolverStats estimate_external_ttt(const SolverStats& stats, int64_t sweeps,
                                  uint32_t n_active, const ExternalTiming& ext);

// A value that may be a right-censored lower bound; censored values sort
// above every finite value.
struct CensoredValue {
    double value = 0.0;
    bool censored = false;
};

// Sample median with a distribution-free confidence interval from order
// statistics: with B ~ Binomial(n, 1/2), the bounds are the l-th and
// (n-l)-th order statistics for the largest l >= 1 with
// P(B <= l) + P(B <= l-1) <= 1 - level, which guarantees coverage >= level.
// (At n = 100, level 0.95 this lands on the 40th/60th order statistics.)
// Too-small n falls back to the full range, degenerate at n = 1.
struct MedianCi {
    CensoredValue median, lo, hi;
    int l = 0, u = 0;  // 1-based order-statistic indices of the bounds
};

MedianCi median_ci(std::vector<CensoredValue> values, double level = 0.95);

// Per-input ratios software_ttt / reference_ttt plus their aggregated
// median. Inputs are matched by id; a censored numerator censors the ratio.
struct InputDuration {
    std::string input;
    int64_t ns = 0;
    bool censored = false;
};

struct RatioSet {
    std::vector<std::string> input;
    std::vector<CensoredValue> ratio;
    MedianCi aggregate;
};

RatioSet relative_performance(std::vector<InputDuration> software,
                              std::vector<InputDuration> reference,
                              double level = 0.95);

enum class Metric { Stt, TttAnneal, TttTotal };

// Best-tuned entry under the selected metric. Censored entries lose to any
// finite entry. Ties: the STT selector keeps the most-sweeps entry (per-sample
// cost is ignored under STT, so more sweeps never hurts); the TTT selectors
// keep the fewest-sweeps entry; remaining ties break to the smaller id.
const SolverStats& portfolio_best(std::span<const SolverStats> entries, Metric metric);

}  // namespace ttt
