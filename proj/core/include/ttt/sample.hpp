#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttt/ising.hpp"

namespace ttt {

// Per-solver timing components in integer nanoseconds. t_i is paid once per
// run (programming/initialization), t_a once per sample (anneal), t_r once
// per sample (readout). Durations are kept as exact integers so every
// downstream report is bit-stable.
struct TimingModel {
    int64_t t_i_ns = 0;
    int64_t t_a_ns = 0;
    int64_t t_r_ns = 0;

    int64_t t_s_ns() const { return t_a_ns + t_r_ns; }
    // Total time for R samples in one batch: T = t_i + R * t_s.
    int64_t total_ns(int64_t r) const { return t_i_ns + r * t_s_ns(); }
};

// Timing constants of the simulated reference annealer (programming 11.6 ms,
// anneal 20 us, readout 320 us per sample).
constexpr TimingModel reference_timing() {
    return TimingModel{11'600'000, 20'000, 320'000};
}

struct Sample {
    int64_t energy = 0;
    int64_t anneal_ns = 0;  // duration attributed to producing this sample
    int32_t batch = 0;      // gauge-batch index; 0 and unused when unbatched
};

// Ordered sample collection from one solver run on one instance. configs is
// either empty (energies only, the persisted form) or parallel to samples.
// num_batches > 0 marks gauge-batch structure: samples are grouped by their
// batch index, which partitions [0, num_batches).
struct SampleSet {
    std::string solver_id;
    TimingModel timing;
    int32_t num_batches = 0;
    std::vector<Sample> samples;
    std::vector<SpinConfig> configs;

    size_t size() const { return samples.size(); }
    bool has_batches() const { return num_batches > 0; }
    bool has_configs() const { return !configs.empty(); }
};

}  // namespace ttt
