#include "ttt/ising.hpp"

#include <stdexcept>
#include <string>

namespace ttt {

namespace {

void check_shape(const IsingProblem& p, const SpinConfig& s) {
    if (!p.graph) throw std::invalid_argument("problem has no graph");
    if (p.h.size() != p.graph->num_active() || p.j.size() != p.graph->num_edges())
        throw std::invalid_argument("problem weights do not match its graph");
    if (s.size() != p.graph->num_active())
        throw std::invalid_argument("config has " + std::to_string(s.size()) +
                                    " spins, graph has " +
                                    std::to_string(p.graph->num_active()) + " active");
}

}  // namespace

SpinConfig random_config(const WorkingGraph& g, Rng& rng) {
    SpinConfig s(g.num_active());
    for (auto& v : s) v = rng.pm1();
    return s;
}

int64_t energy(const IsingProblem& p, const SpinConfig& s) {
    check_shape(p, s);
    int64_t e = 0;
    for (uint32_t i = 0; i < p.h.size(); ++i) e += int64_t(p.h[i]) * s[i];
    const auto& ec = p.graph->edges_compact();
    for (uint32_t k = 0; k < ec.size(); ++k)
        e += int64_t(p.j[k]) * s[ec[k].first] * s[ec[k].second];
    return e;
}

IsingProblem apply_gauge(const IsingProblem& p, const GaugeTransform& g) {
    check_shape(p, g);
    IsingProblem out;
    out.graph = p.graph;
    out.range = p.range;
    out.h.resize(p.h.size());
    out.j.resize(p.j.size());
    for (uint32_t i = 0; i < p.h.size(); ++i) out.h[i] = g[i] * p.h[i];
    const auto& ec = p.graph->edges_compact();
    for (uint32_t k = 0; k < ec.size(); ++k)
        out.j[k] = g[ec[k].first] * g[ec[k].second] * p.j[k];
    return out;
}

GaugeTransform random_gauge(const WorkingGraph& g, Rng& rng) {
    GaugeTransform t(g.num_active());
    for (auto& v : t) v = rng.pm1();
    return t;
}

SpinConfig compose(const GaugeTransform& g, const SpinConfig& s) {
    if (g.size() != s.size()) throw std::invalid_argument("gauge/config shape mismatch");
    SpinConfig out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = int8_t(g[i] * s[i]);
    return out;
}

CouplingTable make_coupling_table(const IsingProblem& p) {
    if (!p.graph) throw std::invalid_argument("problem has no graph");
    if (p.h.size() != p.graph->num_active() || p.j.size() != p.graph->num_edges())
        throw std::invalid_argument("problem weights do not match its graph");
    const WorkingGraph& g = *p.graph;
    CouplingTable t;
    t.hval.assign(p.h.begin(), p.h.end());
    t.offset.resize(g.num_active() + 1);
    size_t total = 0;
    for (uint32_t i = 0; i < g.num_active(); ++i) {
        t.offset[i] = uint32_t(total);
        total += g.adj_nbr(i).size();
    }
    t.offset[g.num_active()] = uint32_t(total);
    t.nbr.resize(total);
    t.jval.resize(total);
    for (uint32_t i = 0; i < g.num_active(); ++i) {
        auto nbrs = g.adj_nbr(i);
        auto eidx = g.adj_edge(i);
        for (size_t k = 0; k < nbrs.size(); ++k) {
            t.nbr[t.offset[i] + k] = nbrs[k];
            t.jval[t.offset[i] + k] = p.j[eidx[k]];
        }
    }
    return t;
}

int greedy_descent_inplace(const CouplingTable& t, SpinConfig& s) {
    int passes = 0;
    bool flipped = true;
    while (flipped) {
        flipped = false;
        ++passes;
        for (uint32_t i = 0; i < t.num_spins(); ++i) {
            if (flip_delta(t, s, i) < 0) {
                s[i] = int8_t(-s[i]);
                flipped = true;
            }
        }
    }
    return passes;
}

SpinConfig greedy_descent(const IsingProblem& p, const SpinConfig& s) {
    check_shape(p, s);
    CouplingTable t = make_coupling_table(p);
    SpinConfig out = s;
    greedy_descent_inplace(t, out);
    return out;
}

}  // namespace ttt
