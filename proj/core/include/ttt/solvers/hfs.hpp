#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ttt/chimera.hpp"
#include "ttt/ising.hpp"
#include "ttt/rng.hpp"
#include "ttt/sample.hpp"

namespace ttt {

// Subgraph-optimization sampler over trees of half-cells. Each node of the
// contact graph is one side of one cell (up to four qubits); two nodes are
// adjacent when at least one coupler runs between their active qubits:
// the V and H sides of the same cell, vertically adjacent V sides, or
// horizontally adjacent H sides. A set of nodes whose induced contact graph
// is a tree induces a qubit subgraph that tree dynamic programming over
// 16 states per node (one per half-cell spin assignment) minimizes exactly,
// conditioned on the spins outside the selection.

struct ContactNode {
    uint8_t row = 0;
    uint8_t col = 0;
    uint8_t side = 0;                              // Side::V or Side::H
    std::array<int32_t, 4> qubit{-1, -1, -1, -1};  // compact ids, -1 inactive
};

struct ContactCoupler {
    uint8_t unit_a = 0;  // unit index within node a
    uint8_t unit_b = 0;  // unit index within node b
    uint32_t edge = 0;   // edge index in the working graph's canonical order
};

struct ContactEdge {
    uint32_t a = 0;  // node indices, a < b
    uint32_t b = 0;
    std::vector<ContactCoupler> couplers;
};

struct ContactGraph {
    std::vector<ContactNode> nodes;
    std::vector<ContactEdge> edges;
    // per node: (neighbor node, edge index) sorted by neighbor
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> adj;
    std::vector<uint32_t> node_of_qubit;  // compact qubit id -> node index
};

ContactGraph build_contact_graph(const WorkingGraph& g);

// Randomized greedy maximal induced tree: seed with a random node, then
// repeatedly admit a random frontier node while admission keeps the selected
// induced subgraph acyclic (i.e. the candidate touches exactly one selected
// node), until no admissible node remains. Returns selected node indices.
std::vector<uint32_t> draw_maximal_tree(const ContactGraph& cg, Rng& rng);

// Prebuilt per-instance state shared across samples: the contact graph, one
// 16x16 coupling-cost table per contact edge (indexed [state_a*16+state_b],
// a function of the weights alone), and the flattened coupling table.
struct HfsState {
    ContactGraph cg;
    std::vector<std::array<int64_t, 256>> pair_tables;
    CouplingTable table;
};

HfsState make_hfs_state(const IsingProblem& p);

struct HfsConfig {
    int max_stall = 10;  // stop after this many consecutive non-improving trees
    SpinConfig initial;  // empty = draw a uniform random starting configuration
};

struct HfsResult {
    SpinConfig config;
    int64_t energy = 0;
    int32_t tree_sweeps = 0;  // number of tree optimizations performed
};

// Exact conditional minimization of the spins covered by `selected` (node
// indices forming an induced tree in the contact graph), holding all other
// spins of s fixed. Updates s in place. Ties between assignments resolve to
// the smallest state index, so the result is deterministic.
void optimize_tree(const IsingProblem& p, const HfsState& st,
                   const std::vector<uint32_t>& selected, SpinConfig& s);
void optimize_tree(const IsingProblem& p, const ContactGraph& cg,
                   const std::vector<uint32_t>& selected, SpinConfig& s);

HfsResult hfs_sample(const IsingProblem& p, const HfsState& st, const HfsConfig& cfg,
                     Rng rng);
HfsResult hfs_sample(const IsingProblem& p, const HfsConfig& cfg, Rng rng);

struct HfsRun {
    SampleSet set;                     // anneal_ns mirrors timing.t_a_ns
    std::vector<int32_t> tree_sweeps;  // per sample
    double mean_tree_sweeps() const;
};

HfsRun hfs_sample_set(const IsingProblem& p, const HfsConfig& cfg, int r, Rng rng,
                      const TimingModel& timing = {});

inline std::string hfs_solver_id() { return "hfs:tw4"; }

}  // namespace ttt
