#include "ttt/chimera.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ttt {

void WorkingGraph::finalize() {
    std::sort(edges_.begin(), edges_.end());
    compact_.assign(num_vertices(), -1);
    for (uint32_t i = 0; i < active_.size(); ++i) compact_[active_[i]] = int32_t(i);

    inactive_.clear();
    for (uint32_t id = 0; id < num_vertices(); ++id)
        if (compact_[id] < 0) inactive_.push_back(id);

    edges_compact_.clear();
    edges_compact_.reserve(edges_.size());
    std::vector<uint32_t> degree(active_.size(), 0);
    for (const auto& [u, v] : edges_) {
        edges_compact_.emplace_back(uint32_t(compact_[u]), uint32_t(compact_[v]));
        ++degree[compact_[u]];
        ++degree[compact_[v]];
    }

    adj_off_.assign(active_.size() + 1, 0);
    for (uint32_t i = 0; i < active_.size(); ++i)
        adj_off_[i + 1] = adj_off_[i] + degree[i];
    adj_nbr_.assign(adj_off_.back(), 0);
    adj_edge_.assign(adj_off_.back(), 0);
    std::vector<uint32_t> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (uint32_t e = 0; e < edges_compact_.size(); ++e) {
        auto [a, b] = edges_compact_[e];
        adj_nbr_[cursor[a]] = b;
        adj_edge_[cursor[a]++] = e;
        adj_nbr_[cursor[b]] = a;
        adj_edge_[cursor[b]++] = e;
    }
    // edges are sorted lexicographically and compaction is monotone in id,
    // so each vertex's half of the list comes out sorted except for the
    // (u,v)/(v,u) interleaving; fix up per vertex
    for (uint32_t i = 0; i < active_.size(); ++i) {
        uint32_t lo = adj_off_[i], hi = adj_off_[i + 1];
        std::vector<std::pair<uint32_t, uint32_t>> tmp;
        tmp.reserve(hi - lo);
        for (uint32_t k = lo; k < hi; ++k) tmp.emplace_back(adj_nbr_[k], adj_edge_[k]);
        std::sort(tmp.begin(), tmp.end());
        for (uint32_t k = lo; k < hi; ++k) {
            adj_nbr_[k] = tmp[k - lo].first;
            adj_edge_[k] = tmp[k - lo].second;
        }
    }
}

std::vector<uint32_t> WorkingGraph::neighbors(uint32_t id) const {
    if (id >= num_vertices())
        throw std::invalid_argument("vertex id " + std::to_string(id) + " out of range");
    int32_t c = compact_[id];
    if (c < 0)
        throw std::invalid_argument("vertex " + std::to_string(id) + " is inactive");
    std::vector<uint32_t> out;
    for (uint32_t nbr : adj_nbr(uint32_t(c))) out.push_back(active_[nbr]);
    return out;
}

WorkingGraph build_chimera(int size) {
    if (size < 1 || size > 16)
        throw std::invalid_argument("chimera size must be in [1, 16], got " +
                                    std::to_string(size));
    WorkingGraph g;
    g.size_ = size;
    g.active_.resize(g.num_vertices());
    for (uint32_t id = 0; id < g.num_vertices(); ++id) g.active_[id] = id;

    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) {
            // K4,4 inside the cell
            for (int uv = 0; uv < 4; ++uv) {
                for (int uh = 0; uh < 4; ++uh) {
                    uint32_t a = ChimeraCoord{row, col, Side::V, uv}.to_id(size);
                    uint32_t b = ChimeraCoord{row, col, Side::H, uh}.to_id(size);
                    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
                }
            }
            // V side couples to the cell below, H side to the cell at right
            for (int u = 0; u < 4; ++u) {
                if (row + 1 < size) {
                    uint32_t a = ChimeraCoord{row, col, Side::V, u}.to_id(size);
                    uint32_t b = ChimeraCoord{row + 1, col, Side::V, u}.to_id(size);
                    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
                }
                if (col + 1 < size) {
                    uint32_t a = ChimeraCoord{row, col, Side::H, u}.to_id(size);
                    uint32_t b = ChimeraCoord{row, col + 1, Side::H, u}.to_id(size);
                    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
                }
            }
        }
    }
    g.finalize();
    return g;
}

WorkingGraph apply_defects(const WorkingGraph& g, const std::vector<uint32_t>& inactive) {
    for (uint32_t id : inactive)
        if (id >= g.num_vertices())
            throw std::invalid_argument("defect id " + std::to_string(id) + " out of range");

    std::vector<bool> dead(g.num_vertices(), false);
    for (uint32_t id = 0; id < g.num_vertices(); ++id)
        if (!g.is_active(id)) dead[id] = true;
    for (uint32_t id : inactive) dead[id] = true;

    WorkingGraph out;
    out.size_ = g.size();
    for (uint32_t id = 0; id < g.num_vertices(); ++id)
        if (!dead[id]) out.active_.push_back(id);
    for (const auto& [u, v] : g.edges())
        if (!dead[u] && !dead[v]) out.edges_.emplace_back(u, v);
    out.finalize();
    return out;
}

WorkingGraph square_subgraph(const WorkingGraph& g, int sub_size) {
    if (sub_size < 1 || sub_size > g.size())
        throw std::invalid_argument("subgraph size " + std::to_string(sub_size) +
                                    " exceeds parent size " + std::to_string(g.size()));
    auto remap = [&](uint32_t id) {
        ChimeraCoord c = ChimeraCoord::from_id(id, g.size());
        if (c.row >= sub_size || c.col >= sub_size) return int64_t(-1);
        return int64_t(c.to_id(sub_size));
    };

    WorkingGraph out;
    out.size_ = sub_size;
    std::vector<uint32_t> ids;
    for (uint32_t id : g.active_ids()) {
        int64_t m = remap(id);
        if (m >= 0) ids.push_back(uint32_t(m));
    }
    std::sort(ids.begin(), ids.end());
    out.active_ = std::move(ids);
    for (const auto& [u, v] : g.edges()) {
        int64_t mu = remap(u), mv = remap(v);
        if (mu >= 0 && mv >= 0)
            out.edges_.emplace_back(uint32_t(std::min(mu, mv)), uint32_t(std::max(mu, mv)));
    }
    out.finalize();
    return out;
}

}  // namespace ttt
