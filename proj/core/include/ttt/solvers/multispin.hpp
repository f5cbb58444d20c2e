#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ttt/ising.hpp"
#include "ttt/rng.hpp"
#include "ttt/sample.hpp"
#include "ttt/solvers/sa.hpp"

namespace ttt {

// Replicas evolved in parallel per machine word.
inline constexpr int kMsaWordWidth = 64;

// Word whose bit b is set with independent probability p (exact to double
// precision): the binary expansion of p is compared bitwise against a stream
// of random words, so every replica consumes its own uniform variate.
uint64_t bernoulli_mask(double p, Rng& rng);

// One word-parallel anneal on a range-1, field-free instance: 64 replicas
// run the schedule simultaneously using bit-sliced neighbor-violation
// counters; per-replica flip decisions are exact independent Metropolis
// draws. Each replica is finished with greedy descent. Throws on any |J| != 1
// or nonzero field.
std::vector<std::pair<SpinConfig, int64_t>> multispin_sa_batch(const IsingProblem& p,
                                                               const SAParams& params,
                                                               Rng rng);

// ceil(r / 64) batches concatenated (the sample count rounds up to a whole
// number of words). Solver id msa:<sweeps>.
SampleSet msa_sample_set(const IsingProblem& p, const SAParams& params, int r, Rng rng,
                         const TimingModel& timing = {});

std::string msa_solver_id(const SAParams& params);

// Timing probes for exclusive calibration runs. msa_init_probe performs the
// one-time setup work (precondition checks and the bit-sliced adjacency
// build) and returns its footprint; msa_sweep_probe performs setup plus
// `sweeps` word sweeps of the annealing kernel, so per-sweep cost can be
// measured with the setup amortized across a large sweep count.
size_t msa_init_probe(const IsingProblem& p);
void msa_sweep_probe(const IsingProblem& p, int64_t sweeps, Rng& rng);

}  // namespace ttt
