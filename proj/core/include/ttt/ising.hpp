#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ttt/chimera.hpp"
#include "ttt/rng.hpp"

namespace ttt {

// Spin assignment over the active vertices of a graph, compact order,
// entries in {-1, +1}.
using SpinConfig = std::vector<int8_t>;

// Per-vertex sign flips g in {-1,+1}^n mapping (h, J) -> (g∘h, g⊗J).
using GaugeTransform = std::vector<int8_t>;

// Integer-weighted Ising instance on a working graph. h is indexed by
// compact vertex index, j by graph edge index. Weights are exact integers;
// energies never involve floating point.
struct IsingProblem {
    std::shared_ptr<const WorkingGraph> graph;
    std::vector<int32_t> h;  // one per active vertex
    std::vector<int32_t> j;  // one per edge
    int32_t range = 1;       // declared weight bound of the instance class

    uint32_t num_spins() const { return graph->num_active(); }
};

SpinConfig random_config(const WorkingGraph& g, Rng& rng);

// Energy sum h_i s_i + sum J_ij s_i s_j. Throws on shape mismatch.
int64_t energy(const IsingProblem& p, const SpinConfig& s);

// h'_i = g_i h_i, J'_uv = g_u g_v J_uv. The spectrum is preserved under
// s -> g∘s.
IsingProblem apply_gauge(const IsingProblem& p, const GaugeTransform& g);

GaugeTransform random_gauge(const WorkingGraph& g, Rng& rng);

// Elementwise product g∘s; maps configurations between a gauged problem and
// the nominal one.
SpinConfig compose(const GaugeTransform& g, const SpinConfig& s);

// First-improvement greedy descent: scan vertices in ascending id order,
// flip on strict energy decrease, repeat full passes until none flips.
// Ties never flip, so the scan terminates at a 1-flip local minimum.
SpinConfig greedy_descent(const IsingProblem& p, const SpinConfig& s);

// Flattened per-vertex coupling view used by the sweep kernels. adj holds
// (neighbor compact index, coupling) runs per vertex.
struct CouplingTable {
    std::vector<uint32_t> offset;
    std::vector<uint32_t> nbr;
    std::vector<int32_t> jval;
    std::vector<int32_t> hval;

    uint32_t num_spins() const { return uint32_t(hval.size()); }
};

CouplingTable make_coupling_table(const IsingProblem& p);

// Energy change of flipping spin i.
inline int64_t flip_delta(const CouplingTable& t, const SpinConfig& s, uint32_t i) {
    int64_t field = t.hval[i];
    for (uint32_t k = t.offset[i]; k < t.offset[i + 1]; ++k)
        field += int64_t(t.jval[k]) * s[t.nbr[k]];
    return -2 * int64_t(s[i]) * field;
}

// In-place greedy descent against a prebuilt table; returns pass count.
int greedy_descent_inplace(const CouplingTable& t, SpinConfig& s);

}  // namespace ttt
