#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ttt {

// Half-cell selector inside a Chimera unit cell. V-side qubits couple to the
// vertical grid neighbor, H-side qubits to the horizontal one; within a cell
// the two sides form a K4,4.
enum class Side : uint8_t { V = 0, H = 1 };

struct ChimeraCoord {
    int row = 0;
    int col = 0;
    Side side = Side::V;
    int unit = 0;

    // Row-major over cells, V half before H half, so inter-cell couplers are
    // stride-computable.
    uint32_t to_id(int size) const {
        return uint32_t(8 * (row * size + col) + 4 * int(side) + unit);
    }

    static ChimeraCoord from_id(uint32_t id, int size) {
        ChimeraCoord c;
        c.unit = int(id & 3u);
        c.side = Side((id >> 2) & 1u);
        uint32_t cell = id >> 3;
        c.row = int(cell) / size;
        c.col = int(cell) % size;
        return c;
    }

    bool operator==(const ChimeraCoord&) const = default;
};

using Edge = std::pair<uint32_t, uint32_t>;

// Chimera graph C_s with an active-vertex mask. Vertex ids always cover the
// full [0, 8s^2) range; inactive ids stay addressable but have no incident
// edges. Immutable after construction and safe to share across threads.
class WorkingGraph {
  public:
    WorkingGraph() = default;

    int size() const { return size_; }
    uint32_t num_vertices() const { return uint32_t(8 * size_ * size_); }
    uint32_t num_active() const { return uint32_t(active_.size()); }
    const std::vector<uint32_t>& active_ids() const { return active_; }
    const std::vector<Edge>& edges() const { return edges_; }
    uint32_t num_edges() const { return uint32_t(edges_.size()); }

    bool is_active(uint32_t id) const {
        return id < compact_.size() && compact_[id] >= 0;
    }

    // Compact index of an active vertex: actives numbered 0..num_active)-1
    // in ascending id order. -1 for inactive ids.
    int32_t compact_index(uint32_t id) const {
        return id < compact_.size() ? compact_[id] : -1;
    }

    uint32_t id_of(uint32_t compact) const { return active_[compact]; }

    // Active neighbors of an active vertex, ascending by id.
    std::vector<uint32_t> neighbors(uint32_t id) const;

    // Adjacency over compact indices: [adj_begin, adj_end) entries of
    // (neighbor compact index, edge index).
    std::span<const uint32_t> adj_nbr(uint32_t compact) const {
        return {adj_nbr_.data() + adj_off_[compact],
                adj_nbr_.data() + adj_off_[compact + 1]};
    }
    std::span<const uint32_t> adj_edge(uint32_t compact) const {
        return {adj_edge_.data() + adj_off_[compact],
                adj_edge_.data() + adj_off_[compact + 1]};
    }

    // Edge endpoints as compact indices, parallel to edges().
    const std::vector<std::pair<uint32_t, uint32_t>>& edges_compact() const {
        return edges_compact_;
    }

    const std::vector<uint32_t>& inactive_ids() const { return inactive_; }

    friend WorkingGraph build_chimera(int size);
    friend WorkingGraph apply_defects(const WorkingGraph& g,
                                      const std::vector<uint32_t>& inactive);
    friend WorkingGraph square_subgraph(const WorkingGraph& g, int sub_size);

  private:
    void finalize();  // sort edges, build compact map and CSR adjacency

    int size_ = 0;
    std::vector<uint32_t> active_;    // ascending ids
    std::vector<uint32_t> inactive_;  // ascending ids
    std::vector<int32_t> compact_;    // id -> compact index, -1 if inactive
    std::vector<Edge> edges_;         // canonical u < v, sorted
    std::vector<std::pair<uint32_t, uint32_t>> edges_compact_;
    std::vector<uint32_t> adj_off_, adj_nbr_, adj_edge_;
};

// Defect-free C_s. Throws std::invalid_argument unless 1 <= size <= 16.
WorkingGraph build_chimera(int size);

// Remove the given vertices and all incident edges. Ids must be in range;
// already-inactive ids are accepted.
WorkingGraph apply_defects(const WorkingGraph& g,
                           const std::vector<uint32_t>& inactive);

// Induced working graph on cells with row < sub_size and col < sub_size,
// defects preserved. Vertices are renumbered into the sub-size id layout;
// coordinates (row, col, side, unit) are what carries over.
WorkingGraph square_subgraph(const WorkingGraph& g, int sub_size);

}  // namespace ttt
