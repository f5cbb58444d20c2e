#pragma once

#include <string>

#include "ttt/ising.hpp"
#include "ttt/rng.hpp"
#include "ttt/sample.hpp"
#include "ttt/solvers/sa.hpp"

namespace ttt {

// Simulated reference annealer: a gauge-batched inner sampler carrying the
// hardware timing constants, so every downstream duration formula applies
// unchanged. Defaults: 50 gauges x 1000 samples, programming 11.6 ms,
// anneal 20 us, readout 320 us.
struct ReferenceConfig {
    int gauges = 50;
    int samples_per_gauge = 1000;
    SAParams inner;
    TimingModel timing = reference_timing();
};

std::string reference_solver_id(const ReferenceConfig& cfg);  // ref:<inner id>

// For each gauge batch: draw a random gauge, sample the gauged problem with
// the inner sampler, and map the configurations back to the nominal frame.
// Energies are gauge-invariant, so stored energies equal direct evaluation.
SampleSet reference_sample_run(const IsingProblem& p, const ReferenceConfig& cfg, Rng rng);

}  // namespace ttt
