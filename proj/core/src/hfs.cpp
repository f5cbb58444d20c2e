#include "ttt/solvers/hfs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ttt/solvers/sa.hpp"

namespace ttt {

namespace {

inline uint32_t half_cell_key(const ChimeraCoord& c, int size) {
    return uint32_t(2 * (c.row * size + c.col) + int(c.side));
}

inline int spin_of(uint32_t state, int unit) {
    return (state >> unit) & 1u ? -1 : 1;
}

using PairTable = std::array<int64_t, 256>;

std::vector<PairTable> build_pair_tables(const IsingProblem& p, const ContactGraph& cg) {
    std::vector<PairTable> tables(cg.edges.size());
    for (size_t e = 0; e < cg.edges.size(); ++e) {
        PairTable& tab = tables[e];
        tab.fill(0);
        for (const ContactCoupler& cp : cg.edges[e].couplers) {
            int64_t jv = p.j[cp.edge];
            for (uint32_t sa = 0; sa < 16; ++sa)
                for (uint32_t sb = 0; sb < 16; ++sb)
                    tab[sa * 16 + sb] +=
                        jv * spin_of(sa, cp.unit_a) * spin_of(sb, cp.unit_b);
        }
    }
    return tables;
}

void optimize_tree_impl(const IsingProblem& p, const ContactGraph& cg,
                        const std::vector<PairTable>& tables,
                        const std::vector<uint32_t>& selected, SpinConfig& s) {
    if (s.size() != p.num_spins())
        throw std::invalid_argument("configuration shape mismatch");
    if (selected.empty()) return;
    const WorkingGraph& g = *p.graph;
    const uint32_t k = uint32_t(selected.size());

    std::vector<int32_t> slot(cg.nodes.size(), -1);
    for (uint32_t i = 0; i < k; ++i) slot[selected[i]] = int32_t(i);

    // Per-node state costs: field terms against fixed outside spins. State
    // bit u set means unit u takes spin -1; missing qubits contribute 0.
    std::vector<std::array<int64_t, 16>> cost(k);
    for (uint32_t i = 0; i < k; ++i) {
        const ContactNode& node = cg.nodes[selected[i]];
        int64_t field[4] = {0, 0, 0, 0};
        for (int u = 0; u < 4; ++u) {
            int32_t q = node.qubit[u];
            if (q < 0) continue;
            int64_t f = p.h[uint32_t(q)];
            auto nbrs = g.adj_nbr(uint32_t(q));
            auto eids = g.adj_edge(uint32_t(q));
            for (size_t t = 0; t < nbrs.size(); ++t)
                if (slot[cg.node_of_qubit[nbrs[t]]] < 0)
                    f += int64_t(p.j[eids[t]]) * s[nbrs[t]];
            field[u] = f;
        }
        for (uint32_t st = 0; st < 16; ++st) {
            int64_t c = 0;
            for (int u = 0; u < 4; ++u) c += spin_of(st, u) * field[u];
            cost[i][st] = c;
        }
    }

    // Tree adjacency: contact edges inside the selection. flip marks that the
    // slot is the edge's b endpoint, so its states index the table's columns.
    struct TreeEdge {
        uint32_t other;
        uint32_t table;
        bool flip;
    };
    std::vector<std::vector<TreeEdge>> tadj(k);
    uint32_t tree_edges = 0;
    for (uint32_t i = 0; i < k; ++i) {
        for (auto [w, eidx] : cg.adj[selected[i]]) {
            if (slot[w] < 0 || w < selected[i]) continue;
            uint32_t ib = uint32_t(slot[w]);
            tadj[i].push_back(TreeEdge{ib, eidx, false});
            tadj[ib].push_back(TreeEdge{i, eidx, true});
            ++tree_edges;
        }
    }
    if (tree_edges != k - 1)
        throw std::invalid_argument("selection does not induce a tree");

    // Root at slot 0, order nodes root-first by BFS.
    std::vector<uint32_t> order;
    order.reserve(k);
    std::vector<int32_t> parent(k, -1);
    std::vector<uint8_t> seen(k, 0);
    order.push_back(0);
    seen[0] = 1;
    for (size_t head = 0; head < order.size(); ++head) {
        uint32_t v = order[head];
        for (const TreeEdge& te : tadj[v])
            if (!seen[te.other]) {
                seen[te.other] = 1;
                parent[te.other] = int32_t(v);
                order.push_back(te.other);
            }
    }
    if (order.size() != k)
        throw std::invalid_argument("selection does not induce a tree");

    // Leaf-to-root messages: msg[v][state] = least subtree energy given v's
    // state. choice[v][parent_state] is v's argmin for the backtrack; ties go
    // to the smallest state index, keeping the result deterministic.
    std::vector<std::array<int64_t, 16>> msg = std::move(cost);
    std::vector<std::array<uint8_t, 16>> choice(k);
    for (size_t idx = order.size(); idx-- > 1;) {
        uint32_t v = order[idx];
        uint32_t pr = uint32_t(parent[v]);
        const TreeEdge* up = nullptr;
        for (const TreeEdge& te : tadj[v])
            if (te.other == pr) up = &te;
        const PairTable& tab = tables[up->table];
        for (uint32_t ps = 0; ps < 16; ++ps) {
            int64_t best = INT64_MAX;
            uint8_t arg = 0;
            for (uint32_t cs = 0; cs < 16; ++cs) {
                int64_t val = msg[v][cs] + (up->flip ? tab[ps * 16 + cs] : tab[cs * 16 + ps]);
                if (val < best) {
                    best = val;
                    arg = uint8_t(cs);
                }
            }
            choice[v][ps] = arg;
            msg[pr][ps] += best;
        }
    }

    std::vector<uint8_t> state(k, 0);
    {
        int64_t best = INT64_MAX;
        for (uint32_t st = 0; st < 16; ++st)
            if (msg[0][st] < best) {
                best = msg[0][st];
                state[0] = uint8_t(st);
            }
    }
    for (size_t idx = 1; idx < order.size(); ++idx) {
        uint32_t v = order[idx];
        state[v] = choice[v][state[uint32_t(parent[v])]];
    }

    for (uint32_t i = 0; i < k; ++i) {
        const ContactNode& node = cg.nodes[selected[i]];
        for (int u = 0; u < 4; ++u) {
            int32_t q = node.qubit[u];
            if (q >= 0) s[uint32_t(q)] = int8_t(spin_of(state[i], u));
        }
    }
}

HfsResult sample_with_state(const IsingProblem& p, const HfsState& st,
                            const HfsConfig& cfg, Rng rng) {
    if (cfg.max_stall < 1) throw std::invalid_argument("max_stall must be >= 1");

    SpinConfig s;
    if (cfg.initial.empty()) {
        s = random_config(*p.graph, rng);
    } else {
        if (cfg.initial.size() != p.num_spins())
            throw std::invalid_argument("initial configuration shape mismatch");
        s = cfg.initial;
    }

    int64_t best = table_energy(st.table, s);
    int32_t sweeps = 0;
    int stall = 0;
    while (stall < cfg.max_stall) {
        std::vector<uint32_t> tree = draw_maximal_tree(st.cg, rng);
        optimize_tree_impl(p, st.cg, st.pair_tables, tree, s);
        ++sweeps;
        int64_t e = table_energy(st.table, s);
        if (e < best) {
            best = e;
            stall = 0;
        } else {
            ++stall;
        }
    }
    greedy_descent_inplace(st.table, s);
    int64_t e = table_energy(st.table, s);
    return HfsResult{std::move(s), e, sweeps};
}

}  // namespace

HfsState make_hfs_state(const IsingProblem& p) {
    HfsState st;
    st.cg = build_contact_graph(*p.graph);
    st.pair_tables = build_pair_tables(p, st.cg);
    st.table = make_coupling_table(p);
    return st;
}

ContactGraph build_contact_graph(const WorkingGraph& g) {
    const int s = g.size();
    ContactGraph cg;
    std::vector<int32_t> node_at(size_t(2) * s * s, -1);

    // Compact ids ascend with vertex id, and vertex id orders lexicographically
    // by (cell, side, unit), so nodes come out ascending by (cell, side).
    cg.node_of_qubit.resize(g.num_active());
    for (uint32_t c = 0; c < g.num_active(); ++c) {
        ChimeraCoord co = ChimeraCoord::from_id(g.id_of(c), s);
        uint32_t key = half_cell_key(co, s);
        if (node_at[key] < 0) {
            node_at[key] = int32_t(cg.nodes.size());
            ContactNode n;
            n.row = uint8_t(co.row);
            n.col = uint8_t(co.col);
            n.side = uint8_t(co.side);
            cg.nodes.push_back(n);
        }
        cg.nodes[size_t(node_at[key])].qubit[co.unit] = int32_t(c);
        cg.node_of_qubit[c] = uint32_t(node_at[key]);
    }

    // Group working-graph edges by the half-cell pair they connect. No edge
    // stays within one half-cell, and endpoint order carries over to nodes.
    std::map<std::pair<uint32_t, uint32_t>, std::vector<ContactCoupler>> groups;
    const auto& ec = g.edges_compact();
    for (uint32_t e = 0; e < g.num_edges(); ++e) {
        uint32_t cu = ec[e].first, cv = ec[e].second;
        uint32_t a = cg.node_of_qubit[cu], b = cg.node_of_qubit[cv];
        ContactCoupler cp;
        cp.unit_a = uint8_t(g.id_of(cu) & 3u);
        cp.unit_b = uint8_t(g.id_of(cv) & 3u);
        cp.edge = e;
        groups[{a, b}].push_back(cp);
    }

    cg.adj.resize(cg.nodes.size());
    for (auto& [pair, couplers] : groups) {
        uint32_t idx = uint32_t(cg.edges.size());
        ContactEdge edge;
        edge.a = pair.first;
        edge.b = pair.second;
        edge.couplers = std::move(couplers);
        cg.edges.push_back(std::move(edge));
        cg.adj[pair.first].emplace_back(pair.second, idx);
        cg.adj[pair.second].emplace_back(pair.first, idx);
    }
    for (auto& nbrs : cg.adj) std::sort(nbrs.begin(), nbrs.end());
    return cg;
}

std::vector<uint32_t> draw_maximal_tree(const ContactGraph& cg, Rng& rng) {
    const uint32_t n = uint32_t(cg.nodes.size());
    if (n == 0) return {};

    enum class Mark : uint8_t { Untouched, InFrontier, Decided };
    std::vector<Mark> mark(n, Mark::Untouched);
    std::vector<uint32_t> degree(n, 0);  // selected neighbors so far
    std::vector<uint32_t> selected;
    std::vector<uint32_t> frontier;

    auto select = [&](uint32_t v) {
        selected.push_back(v);
        mark[v] = Mark::Decided;
        for (auto [w, e] : cg.adj[v]) {
            (void)e;
            ++degree[w];
            if (mark[w] == Mark::Untouched) {
                mark[w] = Mark::InFrontier;
                frontier.push_back(w);
            }
        }
    };

    select(uint32_t(rng.below(n)));
    while (!frontier.empty()) {
        size_t pick = rng.below(frontier.size());
        uint32_t v = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        mark[v] = Mark::Decided;
        // a second selected neighbor would close a cycle in the induced graph
        if (degree[v] == 1) select(v);
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

void optimize_tree(const IsingProblem& p, const HfsState& st,
                   const std::vector<uint32_t>& selected, SpinConfig& s) {
    optimize_tree_impl(p, st.cg, st.pair_tables, selected, s);
}

void optimize_tree(const IsingProblem& p, const ContactGraph& cg,
                   const std::vector<uint32_t>& selected, SpinConfig& s) {
    optimize_tree_impl(p, cg, build_pair_tables(p, cg), selected, s);
}

HfsResult hfs_sample(const IsingProblem& p, const HfsState& st, const HfsConfig& cfg,
                     Rng rng) {
    return sample_with_state(p, st, cfg, std::move(rng));
}

HfsResult hfs_sample(const IsingProblem& p, const HfsConfig& cfg, Rng rng) {
    return sample_with_state(p, make_hfs_state(p), cfg, std::move(rng));
}

double HfsRun::mean_tree_sweeps() const {
    if (tree_sweeps.empty()) return 0.0;
    int64_t total = std::accumulate(tree_sweeps.begin(), tree_sweeps.end(), int64_t(0));
    return double(total) / double(tree_sweeps.size());
}

HfsRun hfs_sample_set(const IsingProblem& p, const HfsConfig& cfg, int r, Rng rng,
                      const TimingModel& timing) {
    if (r < 1) throw std::invalid_argument("sample count must be >= 1");
    HfsState st = make_hfs_state(p);
    HfsRun run;
    run.set.solver_id = hfs_solver_id();
    run.set.timing = timing;
    for (int i = 0; i < r; ++i) {
        HfsResult res = sample_with_state(p, st, cfg, rng.child(uint64_t(i)));
        run.set.samples.push_back(Sample{res.energy, timing.t_a_ns, 0});
        run.set.configs.push_back(std::move(res.config));
        run.tree_sweeps.push_back(res.tree_sweeps);
    }
    return run;
}

}  // namespace ttt
