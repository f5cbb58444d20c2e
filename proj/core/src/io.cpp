#include "ttt/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ttt {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error(what);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail("cannot open " + path);
    return is;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) fail("cannot write " + path);
    return os;
}

// next content line, skipping blanks and '#' comments
bool next_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (line[i] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    return false;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back;
        if (sscanf(buf, "%lf", &back) == 1 && back == v) break;
    }
    return buf;
}

void save_graph(std::ostream& os, const WorkingGraph& g) {
    os << "chimera " << g.size() << ' ' << g.num_active() << '\n';
    for (uint32_t id : g.inactive_ids()) os << "x " << id << '\n';
    for (const auto& [u, v] : g.edges()) os << "e " << u << ' ' << v << '\n';
}

void save_graph(const std::string& path, const WorkingGraph& g) {
    auto os = open_out(path);
    save_graph(os, g);
}

namespace {

// Parses the graph block: the "chimera" header must already be in `line`.
// Afterwards `line` holds the first non-graph line (if any) and the return
// tells whether one was read.
struct GraphBlock {
    WorkingGraph graph;
    bool has_next = false;
};

GraphBlock read_graph_block(std::istream& is, std::string& line) {
    std::istringstream hdr(line);
    std::string tag;
    int size = 0;
    uint32_t n_active = 0;
    if (!(hdr >> tag >> size >> n_active) || tag != "chimera")
        fail("bad graph header: " + line);

    std::vector<uint32_t> inactive;
    std::vector<Edge> file_edges;
    GraphBlock out;
    while ((out.has_next = next_line(is, line))) {
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "x") {
            uint32_t id;
            if (!(ls >> id)) fail("bad defect line: " + line);
            inactive.push_back(id);
        } else if (kind == "e") {
            uint32_t u, v;
            if (!(ls >> u >> v)) fail("bad edge line: " + line);
            file_edges.emplace_back(u, v);
        } else {
            break;
        }
    }

    out.graph = apply_defects(build_chimera(size), inactive);
    if (out.graph.num_active() != n_active)
        fail("graph header claims " + std::to_string(n_active) + " active vertices, " +
             "reconstruction has " + std::to_string(out.graph.num_active()));
    if (file_edges != out.graph.edges())
        fail("graph edge list does not match the Chimera topology for its size "
             "and defect list");
    return out;
}

}  // namespace

WorkingGraph load_graph(std::istream& is) {
    std::string line;
    if (!next_line(is, line)) fail("empty graph file");
    GraphBlock block = read_graph_block(is, line);
    if (block.has_next) fail("trailing content in graph file: " + line);
    return block.graph;
}

WorkingGraph load_graph(const std::string& path) {
    auto is = open_in(path);
    return load_graph(is);
}

void save_instance(std::ostream& os, const IsingProblem& p,
                   std::optional<int64_t> planted_energy) {
    if (!p.graph) fail("instance has no graph");
    os << "ising inline " << p.range << '\n';
    save_graph(os, *p.graph);
    if (planted_energy) os << "planted " << *planted_energy << '\n';
    for (uint32_t i = 0; i < p.h.size(); ++i)
        if (p.h[i] != 0) os << "h " << p.graph->id_of(i) << ' ' << p.h[i] << '\n';
    const auto& edges = p.graph->edges();
    for (uint32_t e = 0; e < edges.size(); ++e)
        os << "J " << edges[e].first << ' ' << edges[e].second << ' ' << p.j[e] << '\n';
}

void save_instance(const std::string& path, const IsingProblem& p,
                   std::optional<int64_t> planted_energy) {
    auto os = open_out(path);
    save_instance(os, p, planted_energy);
}

LoadedInstance load_instance(std::istream& is, const std::string& graph_dir) {
    std::string line;
    if (!next_line(is, line)) fail("empty instance file");
    std::istringstream hdr(line);
    std::string tag, source;
    int range = 0;
    if (!(hdr >> tag >> source >> range) || tag != "ising" || range < 1)
        fail("bad instance header: " + line);

    LoadedInstance out;
    bool more;
    if (source == "inline") {
        if (!next_line(is, line)) fail("instance missing its graph block");
        GraphBlock block = read_graph_block(is, line);
        out.problem.graph = std::make_shared<WorkingGraph>(std::move(block.graph));
        more = block.has_next;
    } else {
        std::string path = graph_dir.empty() ? source : graph_dir + "/" + source;
        out.problem.graph = std::make_shared<WorkingGraph>(load_graph(path));
        more = next_line(is, line);
    }

    const WorkingGraph& g = *out.problem.graph;
    out.problem.range = range;
    out.problem.h.assign(g.num_active(), 0);
    out.problem.j.assign(g.num_edges(), 0);
    const auto& edges = g.edges();

    for (; more; more = next_line(is, line)) {
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "planted") {
            int64_t e;
            if (!(ls >> e)) fail("bad planted line: " + line);
            out.planted_energy = e;
        } else if (kind == "h") {
            uint32_t id;
            int32_t value;
            if (!(ls >> id >> value)) fail("bad field line: " + line);
            int32_t c = g.compact_index(id);
            if (c < 0) fail("field on missing vertex: " + line);
            out.problem.h[size_t(c)] = value;
        } else if (kind == "J") {
            uint32_t u, v;
            int32_t value;
            if (!(ls >> u >> v >> value)) fail("bad coupling line: " + line);
            Edge e{std::min(u, v), std::max(u, v)};
            auto it = std::lower_bound(edges.begin(), edges.end(), e);
            if (it == edges.end() || *it != e) fail("coupling on missing edge: " + line);
            out.problem.j[size_t(it - edges.begin())] = value;
        } else {
            fail("unexpected line in instance file: " + line);
        }
    }
    return out;
}

LoadedInstance load_instance(const std::string& path) {
    auto is = open_in(path);
    std::string dir = ".";
    if (auto slash = path.find_last_of('/'); slash != std::string::npos)
        dir = path.substr(0, slash);
    return load_instance(is, dir);
}

void save_samples(std::ostream& os, const SampleSet& s) {
    os << "samples " << s.solver_id << ' ' << s.samples.size() << ' ' << s.num_batches
       << ' ' << s.timing.t_i_ns << ' ' << s.timing.t_a_ns << ' ' << s.timing.t_r_ns
       << '\n';
    for (const auto& smp : s.samples)
        os << "s " << smp.energy << ' ' << smp.anneal_ns << ' ' << smp.batch << '\n';
}

void save_samples(const std::string& path, const SampleSet& s) {
    auto os = open_out(path);
    save_samples(os, s);
}

SampleSet load_samples(std::istream& is) {
    std::string line;
    if (!next_line(is, line)) fail("empty sample file");
    std::istringstream hdr(line);
    std::string tag;
    size_t n = 0;
    SampleSet out;
    if (!(hdr >> tag >> out.solver_id >> n >> out.num_batches >> out.timing.t_i_ns >>
          out.timing.t_a_ns >> out.timing.t_r_ns) ||
        tag != "samples")
        fail("bad sample header: " + line);
    out.samples.reserve(n);
    while (next_line(is, line)) {
        std::istringstream ls(line);
        std::string kind;
        Sample s;
        if (!(ls >> kind >> s.energy >> s.anneal_ns >> s.batch) || kind != "s")
            fail("bad sample line: " + line);
        if (out.num_batches > 0 && (s.batch < 0 || s.batch >= out.num_batches))
            fail("sample batch index out of range: " + line);
        out.samples.push_back(s);
    }
    if (out.samples.size() != n)
        fail("sample file header claims " + std::to_string(n) + " samples, found " +
             std::to_string(out.samples.size()));
    return out;
}

SampleSet load_samples(const std::string& path) {
    auto is = open_in(path);
    return load_samples(is);
}

void save_targets(std::ostream& os, const std::vector<TargetSpec>& targets) {
    for (const auto& t : targets)
        os << "t " << format_double(t.q) << ' ' << t.e_q << '\n';
}

void save_targets(const std::string& path, const std::vector<TargetSpec>& targets) {
    auto os = open_out(path);
    save_targets(os, targets);
}

std::vector<TargetSpec> load_targets(std::istream& is) {
    std::vector<TargetSpec> out;
    std::string line;
    while (next_line(is, line)) {
        std::istringstream ls(line);
        std::string kind;
        TargetSpec t;
        if (!(ls >> kind >> t.q >> t.e_q) || kind != "t")
            fail("bad target line: " + line);
        out.push_back(t);
    }
    return out;
}

std::vector<TargetSpec> load_targets(const std::string& path) {
    auto is = open_in(path);
    return load_targets(is);
}

}  // namespace ttt
