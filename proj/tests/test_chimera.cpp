#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "ttt/chimera.hpp"
#include "ttt/rng.hpp"

using namespace ttt;

TEST_CASE("vertex and edge counts match the closed forms") {
    for (int s = 1; s <= 12; ++s) {
        WorkingGraph g = build_chimera(s);
        CAPTURE(s);
        CHECK(g.num_vertices() == uint32_t(8 * s * s));
        CHECK(g.num_active() == uint32_t(8 * s * s));
        CHECK(g.num_edges() == uint32_t(16 * s * s + 8 * s * (s - 1)));
    }
    // the headline sizes
    WorkingGraph c12 = build_chimera(12);
    CHECK(c12.num_active() == 1152);
    CHECK(c12.num_edges() == 3360);
    WorkingGraph c4 = build_chimera(4);
    CHECK(c4.num_active() == 128);
    CHECK(c4.num_edges() == 352);
    WorkingGraph c1 = build_chimera(1);
    CHECK(c1.num_active() == 8);
    CHECK(c1.num_edges() == 16);

    CHECK_THROWS_AS(build_chimera(0), std::invalid_argument);
    CHECK_THROWS_AS(build_chimera(17), std::invalid_argument);
}

TEST_CASE("coordinate mapping round-trips") {
    for (int s : {1, 2, 3, 12}) {
        WorkingGraph g = build_chimera(s);
        for (uint32_t id = 0; id < g.num_vertices(); ++id) {
            ChimeraCoord c = ChimeraCoord::from_id(id, s);
            CHECK(c.to_id(s) == id);
            CHECK(c.row >= 0);
            CHECK(c.row < s);
            CHECK(c.col >= 0);
            CHECK(c.col < s);
            CHECK(c.unit >= 0);
            CHECK(c.unit < 4);
        }
    }
    // spot value: row 1, col 0, V side, unit 2 of C2 -> 8*(1*2+0)+0+2
    ChimeraCoord c{1, 0, Side::V, 2};
    CHECK(c.to_id(2) == 18);
    CHECK(ChimeraCoord::from_id(18, 2) == c);
}

TEST_CASE("edge list is canonical") {
    WorkingGraph g = build_chimera(3);
    const auto& e = g.edges();
    CHECK(std::is_sorted(e.begin(), e.end()));
    CHECK(std::adjacent_find(e.begin(), e.end()) == e.end());  // no duplicates
    for (const auto& [u, v] : e) CHECK(u < v);
    CHECK(e.size() == g.edges_compact().size());
    for (size_t k = 0; k < e.size(); ++k) {
        CHECK(g.id_of(g.edges_compact()[k].first) == e[k].first);
        CHECK(g.id_of(g.edges_compact()[k].second) == e[k].second);
    }
}

TEST_CASE("degrees and explicit neighbor sets") {
    SUBCASE("C1 is a K4,4: every vertex has degree 4") {
        WorkingGraph g = build_chimera(1);
        for (uint32_t id = 0; id < 8; ++id) CHECK(g.neighbors(id).size() == 4);
    }
    SUBCASE("interior vertices of C3 have degree 6") {
        WorkingGraph g = build_chimera(3);
        // cell (1,1) is interior in both directions
        for (int side = 0; side < 2; ++side)
            for (int unit = 0; unit < 4; ++unit) {
                ChimeraCoord c{1, 1, Side(side), unit};
                CHECK(g.neighbors(c.to_id(3)).size() == 6);
            }
    }
    SUBCASE("corner-cell V vertex of C2 has 5 neighbors") {
        WorkingGraph g = build_chimera(2);
        ChimeraCoord c{0, 0, Side::V, 0};
        std::vector<uint32_t> n = g.neighbors(c.to_id(2));
        CHECK(n == std::vector<uint32_t>{4, 5, 6, 7, 16});
        CHECK(std::is_sorted(n.begin(), n.end()));
    }
    SUBCASE("V couples vertically, H horizontally") {
        WorkingGraph g = build_chimera(3);
        for (const auto& [u, v] : g.edges()) {
            ChimeraCoord a = ChimeraCoord::from_id(u, 3);
            ChimeraCoord b = ChimeraCoord::from_id(v, 3);
            if (a.row == b.row && a.col == b.col) {
                CHECK(a.side != b.side);  // in-cell K4,4 edge
            } else if (a.side == Side::V) {
                CHECK(b.side == Side::V);
                CHECK(a.col == b.col);
                CHECK(std::abs(a.row - b.row) == 1);
                CHECK(a.unit == b.unit);
            } else {
                CHECK(b.side == Side::H);
                CHECK(a.row == b.row);
                CHECK(std::abs(a.col - b.col) == 1);
                CHECK(a.unit == b.unit);
            }
        }
    }
}

TEST_CASE("defects remove vertices and incident edges") {
    WorkingGraph c12 = build_chimera(12);
    SUBCASE("55 defects leave 1097 active vertices") {
        Rng rng(2026);
        std::set<uint32_t> picks;
        while (picks.size() < 55) picks.insert(uint32_t(rng.below(1152)));
        WorkingGraph g =
            apply_defects(c12, std::vector<uint32_t>(picks.begin(), picks.end()));
        CHECK(g.num_active() == 1097);
        for (uint32_t d : picks) CHECK_FALSE(g.is_active(d));
        for (const auto& [u, v] : g.edges()) {
            CHECK(g.is_active(u));
            CHECK(g.is_active(v));
        }
    }
    SUBCASE("empty mask is the identity") {
        WorkingGraph g = apply_defects(c12, {});
        CHECK(g.num_active() == c12.num_active());
        CHECK(g.edges() == c12.edges());
    }
    SUBCASE("C1 minus one V vertex keeps 7 vertices and 12 edges") {
        WorkingGraph g = apply_defects(build_chimera(1), {2});
        CHECK(g.num_active() == 7);
        CHECK(g.num_edges() == 12);
        CHECK(g.compact_index(2) == -1);
        CHECK(g.inactive_ids() == std::vector<uint32_t>{2});
    }
    SUBCASE("already-inactive ids are accepted, out-of-range rejected") {
        WorkingGraph g = apply_defects(build_chimera(1), {3});
        WorkingGraph h = apply_defects(g, {3, 4});
        CHECK(h.num_active() == 6);
        CHECK_THROWS_AS(apply_defects(g, {99}), std::invalid_argument);
    }
}

TEST_CASE("square subgraphs") {
    WorkingGraph c3 = build_chimera(3);
    SUBCASE("C3 restricted to 2x2 equals C2") {
        WorkingGraph sub = square_subgraph(c3, 2);
        WorkingGraph c2 = build_chimera(2);
        CHECK(sub.size() == 2);
        CHECK(sub.active_ids() == c2.active_ids());
        CHECK(sub.edges() == c2.edges());
    }
    SUBCASE("full-size restriction is the identity") {
        WorkingGraph sub = square_subgraph(c3, 3);
        CHECK(sub.active_ids() == c3.active_ids());
        CHECK(sub.edges() == c3.edges());
    }
    SUBCASE("defects inside the window carry over") {
        // deactivate all of cell (0,0): ids 0..7
        WorkingGraph defected = apply_defects(build_chimera(12), {0, 1, 2, 3, 4, 5, 6, 7});
        WorkingGraph sub = square_subgraph(defected, 4);
        CHECK(sub.num_active() == 120);
        for (uint32_t id = 0; id < 8; ++id) CHECK_FALSE(sub.is_active(id));
    }
    SUBCASE("defect coordinates are preserved across renumbering") {
        ChimeraCoord dead{1, 1, Side::H, 3};
        WorkingGraph defected = apply_defects(c3, {dead.to_id(3)});
        WorkingGraph sub = square_subgraph(defected, 2);
        CHECK_FALSE(sub.is_active(dead.to_id(2)));
        CHECK(sub.num_active() == 31);
    }
    SUBCASE("window larger than the parent is rejected") {
        CHECK_THROWS_AS(square_subgraph(c3, 4), std::invalid_argument);
    }
}

TEST_CASE("compact indexing is dense and ordered") {
    WorkingGraph g = apply_defects(build_chimera(2), {5, 17});
    CHECK(g.num_active() == 30);
    uint32_t prev_id = 0;
    for (uint32_t c = 0; c < g.num_active(); ++c) {
        uint32_t id = g.id_of(c);
        CHECK(g.compact_index(id) == int32_t(c));
        if (c > 0) CHECK(id > prev_id);
        prev_id = id;
    }
    // adjacency spans agree with the edge list
    size_t half_edges = 0;
    for (uint32_t c = 0; c < g.num_active(); ++c) {
        auto nbrs = g.adj_nbr(c);
        auto eids = g.adj_edge(c);
        REQUIRE(nbrs.size() == eids.size());
        half_edges += nbrs.size();
        for (size_t k = 0; k < nbrs.size(); ++k) {
            auto [a, b] = g.edges_compact()[eids[k]];
            CHECK(((a == c && b == nbrs[k]) || (b == c && a == nbrs[k])));
        }
    }
    CHECK(half_edges == 2 * size_t(g.num_edges()));
}
