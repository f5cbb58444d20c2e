#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ttt/ising.hpp"
#include "ttt/rng.hpp"
#include "ttt/sample.hpp"

namespace ttt {

// Linear inverse-temperature ramp. With scaled set, both endpoints are
// divided by the instance's declared range so RANr instances see the same
// effective schedule as their range-1 rescaling.
struct SASchedule {
    double beta_start = 0.01;
    double beta_end = 3.0;
    bool scaled = false;
};

struct SAParams {
    int sweeps = 1000;
    SASchedule schedule;

    std::string solver_id() const;  // sa:<sweeps>:<scaled|unscaled>
};

// Energy of a configuration from the flattened table (each edge counted from
// both endpoints, hence the halving).
int64_t table_energy(const CouplingTable& t, const SpinConfig& s);

// One anneal pass over an existing configuration: `sweeps` Metropolis sweeps
// in ascending vertex order, beta interpolated linearly per sweep inclusive
// of both endpoints (a single sweep runs at beta_end). No post-processing.
void sa_anneal(const CouplingTable& t, const SAParams& params, int range, Rng& rng,
               SpinConfig& s);

// Full sample: uniform random start, anneal, then greedy descent. Returns
// the post-processed configuration and its exact energy.
std::pair<SpinConfig, int64_t> sa_sample(const IsingProblem& p, const SAParams& params,
                                         Rng rng);

// R independent seeded samples (per-sample streams derived from `rng`), with
// the given timing model attached and each sample stamped with its t_a.
SampleSet sa_sample_set(const IsingProblem& p, const SAParams& params, int r, Rng rng,
                        const TimingModel& timing = {});

}  // namespace ttt
