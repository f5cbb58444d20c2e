#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "ttt/chimera.hpp"
#include "ttt/ising.hpp"
#include "ttt/metrics.hpp"
#include "ttt/sample.hpp"

namespace ttt {

// Plain-text formats, all deterministic so identical data round-trips to
// identical bytes.
//
// Graph:      chimera <s> <n_active>
//             x <id>            one line per inactive vertex, ascending
//             e <u> <v>         one line per edge, canonical order
//
// Instance:   ising inline <r>  (or: ising <relative-graph-path> <r>)
//             <graph block when inline>
//             planted <energy>  optional
//             h <id> <value>    ascending id, zero values omitted
//             J <u> <v> <value> one line per edge, canonical order
//
// Samples:    samples <solver_id> <n> <num_batches> <t_i> <t_a> <t_r>
//             s <energy> <anneal_ns> <batch>
//
// Targets:    t <q> <E_q>       one line per quantile, ascending q
//
// Lines starting with '#' and blank lines are ignored on read.

void save_graph(std::ostream& os, const WorkingGraph& g);
void save_graph(const std::string& path, const WorkingGraph& g);
WorkingGraph load_graph(std::istream& is);
WorkingGraph load_graph(const std::string& path);

void save_instance(std::ostream& os, const IsingProblem& p,
                   std::optional<int64_t> planted_energy = std::nullopt);
void save_instance(const std::string& path, const IsingProblem& p,
                   std::optional<int64_t> planted_energy = std::nullopt);

struct LoadedInstance {
    IsingProblem problem;
    std::optional<int64_t> planted_energy;
};

// Validates the embedded graph block against reconstruction from its header
// (size + defect list) and checks every weight lies on the graph.
LoadedInstance load_instance(std::istream& is, const std::string& graph_dir = "");
LoadedInstance load_instance(const std::string& path);

// Persisted sample sets carry energies, durations and batch indices but not
// spin configurations.
void save_samples(std::ostream& os, const SampleSet& s);
void save_samples(const std::string& path, const SampleSet& s);
SampleSet load_samples(std::istream& is);
SampleSet load_samples(const std::string& path);

void save_targets(std::ostream& os, const std::vector<TargetSpec>& targets);
void save_targets(const std::string& path, const std::vector<TargetSpec>& targets);
std::vector<TargetSpec> load_targets(std::istream& is);
std::vector<TargetSpec> load_targets(const std::string& path);

// Shared formatting helper: shortest decimal that round-trips a double
// ("%.17g" trimmed), used everywhere a float enters a text format.
std::string format_double(double v);

}  // namespace ttt
