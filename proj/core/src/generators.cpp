#include "ttt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttt {

namespace {

int parse_int(const std::string& s, size_t& pos) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("bad generator spec: " + s);
    return std::stoi(s.substr(start, pos - start));
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    GeneratorSpec spec;
    size_t pos = 0;
    if (text.rfind("RAN", 0) == 0) {
        spec.family = Family::Ran;
        pos = 3;
        spec.range = parse_int(text, pos);
        if (spec.range < 1) throw std::invalid_argument("RAN range must be >= 1");
        if (pos != text.size()) throw std::invalid_argument("bad generator spec: " + text);
    } else if (text.rfind("AC", 0) == 0) {
        spec.family = Family::Ac;
        pos = 2;
        spec.k = parse_int(text, pos);
        if (spec.k < 1 || spec.k % 2 == 0)
            throw std::invalid_argument("AC multiplier must be odd and >= 1");
        spec.range = std::max(1, spec.k);
        if (pos == text.size()) {
            spec.odd_fields = false;
        } else if (text.substr(pos) == "-odd") {
            spec.odd_fields = true;
        } else {
            throw std::invalid_argument("bad generator spec: " + text);
        }
    } else if (text.rfind("FL", 0) == 0) {
        spec.family = Family::Fl;
        pos = 2;
        spec.range = parse_int(text, pos);
        if (spec.range < 1) throw std::invalid_argument("FL range must be >= 1");
        spec.alpha = 0.25;
        if (pos != text.size()) {
            if (text.substr(pos, 3) != ":a=")
                throw std::invalid_argument("bad generator spec: " + text);
            spec.alpha = std::stod(text.substr(pos + 3));
        }
        if (!(spec.alpha > 0.0) || spec.alpha > 1.0)
            throw std::invalid_argument("FL alpha must be in (0, 1]");
    } else {
        throw std::invalid_argument("unknown generator class: " + text);
    }
    return spec;
}

std::string GeneratorSpec::to_string() const {
    char buf[64];
    switch (family) {
        case Family::Ran:
            snprintf(buf, sizeof buf, "RAN%d", range);
            return buf;
        case Family::Ac:
            snprintf(buf, sizeof buf, "AC%d%s", k, odd_fields ? "-odd" : "");
            return buf;
        case Family::Fl: {
            if (alpha == 0.25) {
                snprintf(buf, sizeof buf, "FL%d", range);
            } else {
                snprintf(buf, sizeof buf, "FL%d:a=%g", range, alpha);
            }
            return buf;
        }
    }
    return "?";
}

std::string GeneratorSpec::dir_name() const {
    std::string s = to_string();
    std::replace(s.begin(), s.end(), ':', '_');
    return s;
}

GeneratedInstance gen_ran(std::shared_ptr<const WorkingGraph> g, int r, Rng rng) {
    if (r < 1) throw std::invalid_argument("RAN range must be >= 1");
    GeneratedInstance out;
    out.problem.graph = g;
    out.problem.range = r;
    out.problem.h.assign(g->num_active(), 0);
    out.problem.j.resize(g->num_edges());
    for (auto& j : out.problem.j) {
        // uniform over the 2r nonzero integers in [-r, r]
        int v = int(rng.below(uint64_t(2 * r)));
        j = v < r ? v - r : v - r + 1;
    }
    return out;
}

GeneratedInstance gen_ac(std::shared_ptr<const WorkingGraph> g, int k, bool odd_fields,
                         Rng rng) {
    if (k < 1 || k % 2 == 0)
        throw std::invalid_argument("AC multiplier must be odd and >= 1");
    GeneratedInstance out;
    out.problem.graph = g;
    out.problem.range = std::max(1, k);
    out.problem.h.assign(g->num_active(), 0);
    out.problem.j.resize(g->num_edges());
    const auto& edges = g->edges();
    for (uint32_t e = 0; e < edges.size(); ++e) {
        bool in_cell = edges[e].first / 8 == edges[e].second / 8;
        int mag = in_cell ? 1 : k;
        out.problem.j[e] = rng.pm1() * mag;
    }
    if (odd_fields) {
        for (uint32_t i = 0; i < g->num_active(); ++i) {
            int64_t sum = 0;
            for (uint32_t e : g->adj_edge(i)) sum += out.problem.j[e];
            if (sum % 2 == 0) out.problem.h[i] = rng.pm1();
        }
    }
    return out;
}

GeneratedInstance gen_fl(std::shared_ptr<const WorkingGraph> g, int r, double alpha,
                         Rng rng) {
    if (r < 1) throw std::invalid_argument("FL range must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("FL alpha must be in (0, 1]");

    constexpr int kMinLoop = 8;  // Chimera girth is 4; short loops are too easy
    // On a single cell only a Hamiltonian walk closes an admissible loop
    // (about one attempt in 500), so the budget must be generous; larger
    // graphs succeed within a handful of attempts.
    constexpr int kMaxAttempts = 20000;

    GeneratedInstance out;
    out.problem.graph = g;
    out.problem.range = r;
    out.problem.h.assign(g->num_active(), 0);
    out.problem.j.assign(g->num_edges(), 0);

    int64_t m = llround(alpha * double(g->num_active()));
    int64_t planted = 0;

    std::vector<int32_t> visited_at(g->num_active(), -1);
    std::vector<uint32_t> path;         // compact indices
    std::vector<uint32_t> cycle_edges;  // edge indices

    for (int64_t c = 0; c < m; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            // random walk until the first revisit; the tail from the revisited
            // vertex onward is the cycle
            path.clear();
            uint32_t v = uint32_t(rng.below(g->num_active()));
            if (g->adj_nbr(v).empty()) continue;
            visited_at[v] = 0;
            path.push_back(v);
            int cycle_start = -1;
            while (cycle_start < 0) {
                auto nbrs = g->adj_nbr(v);
                if (nbrs.empty()) break;
                uint32_t next = nbrs[rng.below(nbrs.size())];
                if (visited_at[next] >= 0) {
                    cycle_start = visited_at[next];
                } else {
                    visited_at[next] = int32_t(path.size());
                    path.push_back(next);
                }
                v = next;
            }
            if (cycle_start < 0) {  // dead-ended on an isolated stretch
                for (uint32_t u : path) visited_at[u] = -1;
                continue;
            }
            int len = int(path.size()) - cycle_start;
            for (uint32_t u : path) visited_at[u] = -1;
            if (len < kMinLoop) continue;

            // collect the cycle's edge indices
            cycle_edges.clear();
            bool ok = true;
            for (int i = 0; i < len; ++i) {
                uint32_t a = path[cycle_start + i];
                uint32_t b = path[cycle_start + (i + 1) % len];
                auto nbrs = g->adj_nbr(a);
                auto eids = g->adj_edge(a);
                uint32_t e = UINT32_MAX;
                for (size_t t = 0; t < nbrs.size(); ++t)
                    if (nbrs[t] == b) { e = eids[t]; break; }
                if (e == UINT32_MAX) { ok = false; break; }
                cycle_edges.push_back(e);
            }
            if (!ok) continue;

            // one +1 edge, the rest -1; reject the whole loop on a range breach
            uint32_t plus = uint32_t(rng.below(cycle_edges.size()));
            for (size_t i = 0; i < cycle_edges.size() && ok; ++i) {
                int delta = i == plus ? 1 : -1;
                if (std::abs(out.problem.j[cycle_edges[i]] + delta) > r) ok = false;
            }
            if (!ok) continue;

            for (size_t i = 0; i < cycle_edges.size(); ++i)
                out.problem.j[cycle_edges[i]] += i == plus ? 1 : -1;
            planted += 2 - len;
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("frustrated-loop generation failed: no admissible "
                                     "loop after 1000 attempts (graph too sparse or "
                                     "range too tight)");
    }

    out.planted_config = SpinConfig(g->num_active(), int8_t(1));
    out.planted_energy = planted;
    return out;
}

GeneratedInstance generate(std::shared_ptr<const WorkingGraph> g, const GeneratorSpec& spec,
                           Rng rng) {
    switch (spec.family) {
        case GeneratorSpec::Family::Ran:
            return gen_ran(std::move(g), spec.range, rng);
        case GeneratorSpec::Family::Ac:
            return gen_ac(std::move(g), spec.k, spec.odd_fields, rng);
        case GeneratorSpec::Family::Fl:
            return gen_fl(std::move(g), spec.range, spec.alpha, rng);
    }
    throw std::logic_error("unreachable");
}

}  // namespace ttt
