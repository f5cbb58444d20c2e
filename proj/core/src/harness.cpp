#include "ttt/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "ttt/io.hpp"
#include "ttt/metrics.hpp"
#include "ttt/solvers/hfs.hpp"
#include "ttt/solvers/multispin.hpp"
#include "ttt/solvers/reference.hpp"
#include "ttt/solvers/sa.hpp"

namespace ttt {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

int ExperimentConfig::effective_parent_size() const {
    if (parent_size > 0) return parent_size;
    int best = 0;
    for (int s : sizes) best = std::max(best, s);
    return best;
}

ExperimentConfig desk_profile() {
    return ExperimentConfig{};  // the defaults are the desk profile
}

ExperimentConfig paper_profile() {
    ExperimentConfig cfg;
    cfg.classes = {"RAN1", "RAN3", "RAN7", "RAN127", "AC3-odd", "FL3"};
    cfg.sizes = {4, 5, 6, 7, 8, 9, 10, 11, 12};
    cfg.instances_per_cell = 100;
    cfg.parent_size = 12;
    cfg.defects.count = 55;  // 1152 fabricated - 55 defects = 1097 active
    cfg.quantiles = {0.001, 0.01, 0.1};
    cfg.reference.gauges = 50;
    cfg.reference.samples_per_gauge = 1000;
    cfg.solvers.sa_sweeps = {10, 20, 40, 100, 200, 400, 1000, 2000, 4000, 10000};
    cfg.solvers.msa_sweeps = cfg.solvers.sa_sweeps;
    cfg.solvers.samples_per_solver = 1000;
    return cfg;
}

ExperimentConfig profile_by_name(const std::string& name) {
    if (name == "desk") return desk_profile();
    if (name == "paper") return paper_profile();
    throw std::invalid_argument("unknown profile '" + name + "' (expected desk or paper)");
}

namespace {

ojson solvers_to_json(const SolverGridConfig& s) {
    return ojson{{"sa_sweeps", s.sa_sweeps},
                 {"sa_unscaled", s.sa_unscaled},
                 {"sa_scaled", s.sa_scaled},
                 {"msa", s.msa},
                 {"msa_sweeps", s.msa_sweeps},
                 {"hfs", s.hfs},
                 {"hfs_max_stall", s.hfs_max_stall},
                 {"samples_per_solver", s.samples_per_solver},
                 {"estimates", s.estimates}};
}

// Pop `key` from j into `out` when present, so leftovers flag unknown keys.
template <typename T>
void take(ojson& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        it->get_to(out);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
    j.erase(it);
}

void reject_leftovers(const ojson& j, const char* where) {
    if (j.empty()) return;
    std::string keys;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!keys.empty()) keys += ", ";
        keys += it.key();
    }
    throw std::invalid_argument(std::string("unknown config key(s) in ") + where + ": " +
                                keys);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    ojson j;
    j["schema"] = 1;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    j["classes"] = cfg.classes;
    j["sizes"] = cfg.sizes;
    j["instances_per_cell"] = cfg.instances_per_cell;
    j["parent_size"] = cfg.parent_size;
    j["defects"] = ojson{{"count", cfg.defects.count}, {"ids", cfg.defects.ids}};
    j["quantiles"] = cfg.quantiles;
    j["reference"] = ojson{{"gauges", cfg.reference.gauges},
                           {"samples_per_gauge", cfg.reference.samples_per_gauge},
                           {"inner_sweeps", cfg.reference.inner_sweeps},
                           {"inner_scaled", cfg.reference.inner_scaled}};
    j["solvers"] = solvers_to_json(cfg.solvers);
    return j.dump(2) + "\n";
}

void overlay_config_json(ExperimentConfig& cfg, const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    int schema = 1;
    take(j, "schema", schema);
    if (schema != 1) throw std::invalid_argument("unsupported config schema version");

    take(j, "seed", cfg.seed);
    take(j, "out", cfg.out);
    take(j, "classes", cfg.classes);
    take(j, "sizes", cfg.sizes);
    take(j, "instances_per_cell", cfg.instances_per_cell);
    take(j, "parent_size", cfg.parent_size);
    take(j, "quantiles", cfg.quantiles);

    if (auto it = j.find("defects"); it != j.end()) {
        ojson d = *it;
        j.erase(it);
        take(d, "count", cfg.defects.count);
        take(d, "ids", cfg.defects.ids);
        reject_leftovers(d, "defects");
    }
    if (auto it = j.find("reference"); it != j.end()) {
        ojson d = *it;
        j.erase(it);
        take(d, "gauges", cfg.reference.gauges);
        take(d, "samples_per_gauge", cfg.reference.samples_per_gauge);
        take(d, "inner_sweeps", cfg.reference.inner_sweeps);
        take(d, "inner_scaled", cfg.reference.inner_scaled);
        reject_leftovers(d, "reference");
    }
    if (auto it = j.find("solvers"); it != j.end()) {
        ojson d = *it;
        j.erase(it);
        take(d, "sa_sweeps", cfg.solvers.sa_sweeps);
        take(d, "sa_unscaled", cfg.solvers.sa_unscaled);
        take(d, "sa_scaled", cfg.solvers.sa_scaled);
        take(d, "msa", cfg.solvers.msa);
        take(d, "msa_sweeps", cfg.solvers.msa_sweeps);
        take(d, "hfs", cfg.solvers.hfs);
        take(d, "hfs_max_stall", cfg.solvers.hfs_max_stall);
        take(d, "samples_per_solver", cfg.solvers.samples_per_solver);
        take(d, "estimates", cfg.solvers.estimates);
        reject_leftovers(d, "solvers");
    }
    reject_leftovers(j, "config");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.out.empty()) throw std::invalid_argument("output directory must be set");
    if (cfg.classes.empty()) throw std::invalid_argument("no problem classes configured");
    for (const std::string& c : cfg.classes) GeneratorSpec::parse(c);  // throws
    if (cfg.sizes.empty()) throw std::invalid_argument("no sizes configured");
    int parent = cfg.effective_parent_size();
    if (parent < 1 || parent > 16)
        throw std::invalid_argument("parent size must lie in [1, 16]");
    for (int s : cfg.sizes)
        if (s < 1 || s > parent)
            throw std::invalid_argument(
                "every size must lie in [1, parent size] (instances are cut from the "
                "parent working graph)");
    if (cfg.instances_per_cell < 1)
        throw std::invalid_argument("instances_per_cell must be >= 1");
    if (cfg.quantiles.empty()) throw std::invalid_argument("no quantiles configured");
    for (double q : cfg.quantiles)
        if (!(q > 0.0) || !(q < 1.0))
            throw std::invalid_argument("quantiles must lie in (0, 1)");
    if (cfg.defects.count < 0) throw std::invalid_argument("defect count must be >= 0");
    uint32_t nv = uint32_t(8 * parent * parent);
    if (uint32_t(cfg.defects.count) + uint32_t(cfg.defects.ids.size()) >= nv)
        throw std::invalid_argument("defects would deactivate the whole parent graph");
    for (uint32_t id : cfg.defects.ids)
        if (id >= nv) throw std::invalid_argument("defect id outside the parent graph");
    if (cfg.reference.gauges < 1 || cfg.reference.samples_per_gauge < 1 ||
        cfg.reference.inner_sweeps < 1)
        throw std::invalid_argument("reference counts must be >= 1");
    const SolverGridConfig& s = cfg.solvers;
    if ((s.sa_unscaled || s.sa_scaled) && s.sa_sweeps.empty())
        throw std::invalid_argument("SA enabled with an empty sweep grid");
    for (int sw : s.sa_sweeps)
        if (sw < 1) throw std::invalid_argument("SA sweep counts must be >= 1");
    if (s.msa && s.msa_sweeps.empty())
        throw std::invalid_argument("msa enabled with an empty sweep grid");
    for (int sw : s.msa_sweeps)
        if (sw < 1) throw std::invalid_argument("msa sweep counts must be >= 1");
    if (s.hfs_max_stall < 1) throw std::invalid_argument("hfs_max_stall must be >= 1");
    if (s.samples_per_solver < 1)
        throw std::invalid_argument("samples_per_solver must be >= 1");
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

namespace {

std::string cell_dir(const GeneratorSpec& spec, int size) {
    char buf[32];
    snprintf(buf, sizeof buf, "/C%d/", size);
    return spec.dir_name() + buf;
}

std::string index_name(int index, const char* ext) {
    char buf[32];
    snprintf(buf, sizeof buf, "%03d%s", index, ext);
    return buf;
}

}  // namespace

std::string config_file(const ExperimentConfig& cfg) { return cfg.out + "/config.json"; }
std::string timings_file(const ExperimentConfig& cfg) { return cfg.out + "/timings.json"; }
std::string results_file(const ExperimentConfig& cfg) { return cfg.out + "/results.jsonl"; }
std::string report_csv_file(const ExperimentConfig& cfg) { return cfg.out + "/report.csv"; }
std::string report_json_file(const ExperimentConfig& cfg) { return cfg.out + "/report.json"; }

std::string instance_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                          int size, int index) {
    return cfg.out + "/instances/" + cell_dir(spec, size) + index_name(index, ".ising");
}

std::string reference_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                           int size, int index) {
    return cfg.out + "/reference/" + cell_dir(spec, size) + index_name(index, ".samples");
}

std::string targets_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                         int size, int index) {
    return cfg.out + "/targets/" + cell_dir(spec, size) + index_name(index, ".targets");
}

WorkingGraph working_graph_for_size(const ExperimentConfig& cfg, int size) {
    WorkingGraph parent = build_chimera(cfg.effective_parent_size());
    std::vector<uint32_t> defects = cfg.defects.ids;
    if (cfg.defects.count > 0) {
        Rng rng = Rng(cfg.seed).child("defects");
        std::vector<uint32_t> pool = parent.active_ids();
        for (int i = 0; i < cfg.defects.count; ++i) {
            size_t pick = size_t(i) + rng.below(pool.size() - size_t(i));
            std::swap(pool[size_t(i)], pool[pick]);
            defects.push_back(pool[size_t(i)]);
        }
    }
    return square_subgraph(apply_defects(parent, defects), size);
}

// ---------------------------------------------------------------------------
// Stage plumbing
// ---------------------------------------------------------------------------

namespace {

Rng stage_rng(const ExperimentConfig& cfg, std::string_view stage) {
    return Rng(cfg.seed).child(stage);
}

Rng instance_rng(Rng stage, const GeneratorSpec& spec, int size, int index) {
    return stage.child(spec.to_string())
        .child(uint64_t(size))
        .child(uint64_t(index));
}

void ensure_parent_dir(const std::string& path) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

struct Cell {
    GeneratorSpec spec;
    std::string name;  // canonical class name
    int size = 0;
};

std::vector<Cell> cells_of(const ExperimentConfig& cfg) {
    std::vector<Cell> out;
    for (const std::string& c : cfg.classes) {
        GeneratorSpec spec = GeneratorSpec::parse(c);
        for (int size : cfg.sizes) out.push_back(Cell{spec, spec.to_string(), size});
    }
    return out;
}

void progress(const char* stage, const Cell& cell) {
    fprintf(stderr, "[%s] %s C%d\n", stage, cell.name.c_str(), cell.size);
}

std::vector<TargetSpec> targets_from(const SampleSet& ref,
                                     const std::vector<double>& quantiles) {
    std::vector<double> qs = quantiles;
    std::sort(qs.begin(), qs.end());
    std::vector<TargetSpec> targets;
    targets.reserve(qs.size());
    for (double q : qs) targets.push_back(target_energy(ref, q));
    return targets;
}

ReferenceConfig reference_config(const ExperimentConfig& cfg) {
    ReferenceConfig rc;
    rc.gauges = cfg.reference.gauges;
    rc.samples_per_gauge = cfg.reference.samples_per_gauge;
    rc.inner.sweeps = cfg.reference.inner_sweeps;
    rc.inner.schedule.scaled = cfg.reference.inner_scaled;
    rc.timing = reference_timing();
    return rc;
}

}  // namespace

void cmd_generate(const ExperimentConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.out);
    {
        std::ofstream os(config_file(cfg), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + config_file(cfg));
        os << config_to_json(cfg);
    }
    Rng stage = stage_rng(cfg, "generate");
    for (const Cell& cell : cells_of(cfg)) {
        progress("generate", cell);
        auto graph =
            std::make_shared<const WorkingGraph>(working_graph_for_size(cfg, cell.size));
        for (int i = 0; i < cfg.instances_per_cell; ++i) {
            GeneratedInstance gi =
                generate(graph, cell.spec, instance_rng(stage, cell.spec, cell.size, i));
            std::string path = instance_file(cfg, cell.spec, cell.size, i);
            ensure_parent_dir(path);
            save_instance(path, gi.problem, gi.planted_energy);
        }
    }
}

void cmd_reference(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ReferenceConfig rc = reference_config(cfg);
    Rng stage = stage_rng(cfg, "reference");
    for (const Cell& cell : cells_of(cfg)) {
        progress("reference", cell);
        for (int i = 0; i < cfg.instances_per_cell; ++i) {
            LoadedInstance inst = load_instance(instance_file(cfg, cell.spec, cell.size, i));
            SampleSet set = reference_sample_run(
                inst.problem, rc, instance_rng(stage, cell.spec, cell.size, i));
            std::string ref_path = reference_file(cfg, cell.spec, cell.size, i);
            ensure_parent_dir(ref_path);
            save_samples(ref_path, set);
            std::string target_path = targets_file(cfg, cell.spec, cell.size, i);
            ensure_parent_dir(target_path);
            save_targets(target_path, targets_from(set, cfg.quantiles));
        }
    }
}

void cmd_targets(const ExperimentConfig& cfg) {
    validate_config(cfg);
    for (const Cell& cell : cells_of(cfg)) {
        for (int i = 0; i < cfg.instances_per_cell; ++i) {
            SampleSet set = load_samples(reference_file(cfg, cell.spec, cell.size, i));
            std::string target_path = targets_file(cfg, cell.spec, cell.size, i);
            ensure_parent_dir(target_path);
            save_targets(target_path, targets_from(set, cfg.quantiles));
        }
    }
}

// ---------------------------------------------------------------------------
// Timing persistence
// ---------------------------------------------------------------------------

namespace {

std::map<int, SolverTimings> load_timings_map(const std::string& path) {
    std::map<int, SolverTimings> out;
    std::ifstream is(path, std::ios::binary);
    if (!is) return out;
    ojson j = ojson::parse(is);
    if (j.value("schema", 0) != 1)
        throw std::runtime_error(path + ": unsupported timings schema");
    for (auto& [key, val] : j.at("sizes").items()) {
        SolverTimings t;
        t.sa_init_ns = val.at("sa_init_ns").get<int64_t>();
        t.sa_sweep_ns = val.at("sa_sweep_ns").get<double>();
        t.msa_init_ns = val.at("msa_init_ns").get<int64_t>();
        t.msa_word_sweep_ns = val.at("msa_word_sweep_ns").get<double>();
        t.hfs_init_ns = val.at("hfs_init_ns").get<int64_t>();
        t.hfs_tree_sweep_ns = val.at("hfs_tree_sweep_ns").get<double>();
        out[std::stoi(key)] = t;
    }
    return out;
}

void save_timings_map(const std::string& path, const std::map<int, SolverTimings>& m) {
    ojson sizes = ojson::object();
    for (const auto& [size, t] : m) {
        sizes[std::to_string(size)] = ojson{{"sa_init_ns", t.sa_init_ns},
                                            {"sa_sweep_ns", t.sa_sweep_ns},
                                            {"msa_init_ns", t.msa_init_ns},
                                            {"msa_word_sweep_ns", t.msa_word_sweep_ns},
                                            {"hfs_init_ns", t.hfs_init_ns},
                                            {"hfs_tree_sweep_ns", t.hfs_tree_sweep_ns}};
    }
    ojson j{{"schema", 1}, {"sizes", sizes}};
    ensure_parent_dir(path);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
}

// Calibration runs on a synthetic range-1 field-free instance over the same
// working graph the generated instances use: sweep costs depend on the
// adjacency structure, not the weights, and this instance also qualifies for
// the multispin kernel.
SolverTimings calibrate_size(const ExperimentConfig& cfg, int size) {
    auto graph = std::make_shared<const WorkingGraph>(working_graph_for_size(cfg, size));
    GeneratedInstance gi =
        gen_ran(graph, 1, stage_rng(cfg, "time").child(uint64_t(size)));
    return calibrate(gi.problem);
}

}  // namespace

// ---------------------------------------------------------------------------
// Run stage
// ---------------------------------------------------------------------------

namespace {

const char* kMsaSkipReason = "requires range-1, field-free instances";

bool msa_eligible(const IsingProblem& p) {
    if (p.range != 1) return false;
    for (int32_t h : p.h)
        if (h != 0) return false;
    for (int32_t j : p.j)
        if (j != 1 && j != -1) return false;
    return true;
}

std::vector<SAParams> sa_grid(const SolverGridConfig& s) {
    std::vector<SAParams> out;
    for (bool scaled : {false, true}) {
        if (scaled ? !s.sa_scaled : !s.sa_unscaled) continue;
        for (int sweeps : s.sa_sweeps) {
            SAParams p;
            p.sweeps = sweeps;
            p.schedule.scaled = scaled;
            out.push_back(p);
        }
    }
    return out;
}

ojson base_row(const char* kind, const Cell& cell, int index) {
    ojson j;
    j["kind"] = kind;
    j["class"] = cell.name;
    j["size"] = cell.size;
    j["instance"] = index;
    return j;
}

ojson stats_row(const Cell& cell, int index, const char* family, const SolverStats& st) {
    ojson j = base_row("stats", cell, index);
    j["solver"] = st.solver_id;
    j["family"] = family;
    j["sweeps"] = st.sweeps;
    j["q"] = st.q;
    j["target"] = st.target;
    j["n"] = st.n;
    j["successes"] = st.successes;
    j["censored"] = st.censored;
    j["gb_n"] = st.gb_n;
    j["gb_successes"] = st.gb_successes;
    j["ttt_anneal_ns"] = st.ttt_anneal_ns;
    j["ttt_total_ns"] = st.ttt_total_ns;
    return j;
}

ojson skip_row(const Cell& cell, int index, const std::string& solver,
               const char* family, const char* reason) {
    ojson j = base_row("skip", cell, index);
    j["solver"] = solver;
    j["family"] = family;
    j["reason"] = reason;
    return j;
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::Stt: return "stt";
        case Metric::TttAnneal: return "ttt_anneal_ns";
        case Metric::TttTotal: return "ttt_total_ns";
    }
    return "";
}

ojson portfolio_row(const Cell& cell, int index, const std::string& family, Metric m,
                    double q, const SolverStats& win) {
    ojson j = base_row("portfolio", cell, index);
    j["family"] = family;
    j["metric"] = metric_name(m);
    j["q"] = q;
    j["solver"] = win.solver_id;
    j["sweeps"] = win.sweeps;
    j["censored"] = win.censored;
    switch (m) {
        case Metric::Stt: j["value"] = win.stt(); break;
        case Metric::TttAnneal: j["value"] = win.ttt_anneal_ns; break;
        case Metric::TttTotal: j["value"] = win.ttt_total_ns; break;
    }
    return j;
}

struct ResultsWriter {
    std::ofstream os;

    void row(const ojson& j) { os << j.dump() << "\n"; }
};

// Per-instance solver sweep: returns every row for this instance in emission
// order (stats, skips, portfolios, done marker).
std::vector<ojson> run_instance(const ExperimentConfig& cfg, const Cell& cell, int index,
                                const SolverTimings& timings, Rng run_stage) {
    std::vector<ojson> rows;
    LoadedInstance inst = load_instance(instance_file(cfg, cell.spec, cell.size, index));
    const IsingProblem& p = inst.problem;
    SampleSet ref = load_samples(reference_file(cfg, cell.spec, cell.size, index));
    std::vector<TargetSpec> targets =
        load_targets(targets_file(cfg, cell.spec, cell.size, index));
    Rng rng = instance_rng(run_stage, cell.spec, cell.size, index);
    const int r = cfg.solvers.samples_per_solver;
    const bool eligible = msa_eligible(p);

    // reference scored against its own targets
    std::vector<SolverStats> ref_stats;
    for (const TargetSpec& t : targets) {
        SolverStats st = stt(ref, t);
        st.sweeps = cfg.reference.inner_sweeps;
        st = ttt(st, ref.timing);
        ref_stats.push_back(st);
        rows.push_back(stats_row(cell, index, "ref", st));
    }

    // scalar SA grid
    std::vector<std::vector<SolverStats>> sa_stats(targets.size());
    for (const SAParams& params : sa_grid(cfg.solvers)) {
        SampleSet set = sa_sample_set(p, params, r, rng.child(params.solver_id()),
                                      sa_timing(timings, params.sweeps));
        for (size_t ti = 0; ti < targets.size(); ++ti) {
            SolverStats st = stt(set, targets[ti]);
            st.sweeps = params.sweeps;
            st = ttt(st, set.timing);
            sa_stats[ti].push_back(st);
            rows.push_back(stats_row(cell, index, "sa", st));
        }
    }

    // word-parallel multispin SA (range-1 field-free instances only)
    std::vector<std::vector<SolverStats>> msa_stats(targets.size());
    if (cfg.solvers.msa) {
        for (int sweeps : cfg.solvers.msa_sweeps) {
            SAParams params;
            params.sweeps = sweeps;
            if (!eligible) {
                rows.push_back(
                    skip_row(cell, index, msa_solver_id(params), "msa", kMsaSkipReason));
                continue;
            }
            SampleSet set = msa_sample_set(p, params, r, rng.child(msa_solver_id(params)),
                                           msa_timing(timings, sweeps));
            for (size_t ti = 0; ti < targets.size(); ++ti) {
                SolverStats st = stt(set, targets[ti]);
                st.sweeps = sweeps;
                st = ttt(st, set.timing);
                msa_stats[ti].push_back(st);
                rows.push_back(stats_row(cell, index, "msa", st));
            }
        }
    }

    // HFS sampler; per-sample anneal time uses the observed mean tree sweeps
    std::vector<std::vector<SolverStats>> hfs_stats(targets.size());
    if (cfg.solvers.hfs) {
        HfsConfig hc;
        hc.max_stall = cfg.solvers.hfs_max_stall;
        HfsRun run = hfs_sample_set(p, hc, r, rng.child(hfs_solver_id()));
        double mean_sweeps = run.mean_tree_sweeps();
        TimingModel tm = hfs_timing(timings, mean_sweeps);
        run.set.timing = tm;
        for (Sample& s : run.set.samples) s.anneal_ns = tm.t_a_ns;
        for (size_t ti = 0; ti < targets.size(); ++ti) {
            SolverStats st = stt(run.set, targets[ti]);
            st.sweeps = llround(mean_sweeps);
            st = ttt(st, tm);
            hfs_stats[ti].push_back(st);
            ojson row = stats_row(cell, index, "hfs", st);
            row["mean_tree_sweeps"] = mean_sweeps;
            rows.push_back(row);
        }
    }

    // external-solver estimates derived from the scalar SA records
    std::vector<std::vector<SolverStats>> est_stats(targets.size());
    if (cfg.solvers.estimates) {
        bool ms_skip_emitted = false;
        for (size_t ti = 0; ti < targets.size(); ++ti) {
            for (const SolverStats& src : sa_stats[ti]) {
                SolverStats ss =
                    estimate_external_ttt(src, src.sweeps, p.num_spins(), an_ss_ge_fi());
                est_stats[ti].push_back(ss);
                rows.push_back(stats_row(cell, index, "est", ss));
                if (eligible) {
                    SolverStats ms = estimate_external_ttt(src, src.sweeps, p.num_spins(),
                                                           an_ms_r1_nf());
                    est_stats[ti].push_back(ms);
                    rows.push_back(stats_row(cell, index, "est", ms));
                } else if (!ms_skip_emitted) {
                    rows.push_back(skip_row(cell, index, "est:an_ms_r1_nf:*", "est",
                                            kMsaSkipReason));
                    ms_skip_emitted = true;
                }
            }
        }
    }

    // per-family and overall portfolios
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        double q = targets[ti].q;
        auto emit = [&](const std::string& family, const std::vector<SolverStats>& entries,
                        Metric m) {
            if (entries.empty()) return;
            const SolverStats& win =
                portfolio_best(std::span<const SolverStats>(entries), m);
            rows.push_back(portfolio_row(cell, index, family, m, q, win));
        };
        for (Metric m : {Metric::Stt, Metric::TttAnneal, Metric::TttTotal}) {
            emit("sa", sa_stats[ti], m);
            emit("msa", msa_stats[ti], m);
            emit("hfs", hfs_stats[ti], m);
        }
        for (Metric m : {Metric::TttAnneal, Metric::TttTotal})
            emit("est", est_stats[ti], m);

        std::vector<SolverStats> in_house;
        for (const auto* v : {&sa_stats[ti], &msa_stats[ti], &hfs_stats[ti]})
            in_house.insert(in_house.end(), v->begin(), v->end());
        emit("best", in_house, Metric::Stt);
        std::vector<SolverStats> all = in_house;
        all.insert(all.end(), est_stats[ti].begin(), est_stats[ti].end());
        for (Metric m : {Metric::TttAnneal, Metric::TttTotal}) emit("best", all, m);
    }

    rows.push_back(base_row("instance_done", cell, index));
    return rows;
}

}  // namespace

void cmd_run(const ExperimentConfig& cfg, bool resume) {
    validate_config(cfg);

    // per-size timing constants, persisted so reruns reuse identical numbers
    std::map<int, SolverTimings> timings = load_timings_map(timings_file(cfg));
    bool timings_dirty = false;
    for (int size : cfg.sizes) {
        if (timings.count(size)) continue;
        fprintf(stderr, "[run] calibrating timings for C%d\n", size);
        timings[size] = calibrate_size(cfg, size);
        timings_dirty = true;
    }
    if (timings_dirty) save_timings_map(timings_file(cfg), timings);

    // resume: keep rows of completed instances, redo the rest
    std::set<std::tuple<std::string, int, int>> done;
    std::vector<std::string> kept;
    std::string results_path = results_file(cfg);
    if (resume && fs::exists(results_path)) {
        std::ifstream is(results_path, std::ios::binary);
        std::vector<std::pair<std::tuple<std::string, int, int>, std::string>> rows;
        std::string line;
        std::string header;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            ojson j = ojson::parse(line);
            std::string kind = j.value("kind", "");
            if (kind == "header") {
                header = line;
                continue;
            }
            auto key = std::make_tuple(j.value("class", std::string()), j.value("size", 0),
                                       j.value("instance", -1));
            if (kind == "instance_done") done.insert(key);
            rows.emplace_back(key, line);
        }
        if (!header.empty()) kept.push_back(header);
        for (auto& [key, text] : rows)
            if (done.count(key)) kept.push_back(std::move(text));
    }

    ResultsWriter w;
    ensure_parent_dir(results_path);
    w.os.open(results_path, std::ios::binary | std::ios::trunc);
    if (!w.os) throw std::runtime_error("cannot write " + results_path);
    if (kept.empty()) {
        ojson header{{"kind", "header"},
                     {"schema", 1},
                     {"seed", cfg.seed},
                     {"samples_per_solver", cfg.solvers.samples_per_solver}};
        w.row(header);
    } else {
        for (const std::string& line : kept) w.os << line << "\n";
    }

    Rng run_stage = stage_rng(cfg, "run");
    for (const Cell& cell : cells_of(cfg)) {
        progress("run", cell);
        for (int i = 0; i < cfg.instances_per_cell; ++i) {
            if (done.count(std::make_tuple(cell.name, cell.size, i))) continue;
            for (const ojson& row :
                 run_instance(cfg, cell, i, timings.at(cell.size), run_stage))
                w.row(row);
            w.os.flush();
        }
    }
}

// ---------------------------------------------------------------------------
// One-off timing command
// ---------------------------------------------------------------------------

TimeCmdResult cmd_time(const std::string& solver_id, const std::string& instance_path) {
    LoadedInstance inst = load_instance(instance_path);
    const IsingProblem& p = inst.problem;

    TimeCmdResult out;
    out.solver_id = solver_id;

    if (solver_id.rfind("ref:", 0) == 0) {
        out.model = reference_timing();  // fixed hardware constants
        return out;
    }

    std::istringstream ss(solver_id);
    std::string kind;
    std::getline(ss, kind, ':');

    out.raw = calibrate(p);
    if (kind == "sa") {
        std::string sweeps_text, sched;
        if (!std::getline(ss, sweeps_text, ':') || !std::getline(ss, sched) ||
            (sched != "scaled" && sched != "unscaled"))
            throw std::invalid_argument("expected sa:<sweeps>:<scaled|unscaled>");
        int sweeps = std::stoi(sweeps_text);
        if (sweeps < 1) throw std::invalid_argument("sweep count must be >= 1");
        out.model = sa_timing(out.raw, sweeps);
    } else if (kind == "msa") {
        std::string sweeps_text;
        if (!std::getline(ss, sweeps_text)) throw std::invalid_argument("expected msa:<sweeps>");
        int sweeps = std::stoi(sweeps_text);
        if (sweeps < 1) throw std::invalid_argument("sweep count must be >= 1");
        if (out.raw.msa_word_sweep_ns == 0.0)
            throw std::invalid_argument("msa " + std::string(kMsaSkipReason));
        out.model = msa_timing(out.raw, sweeps);
    } else if (kind == "hfs") {
        // observe the sampler's mean tree sweeps on a short seeded run
        HfsRun run = hfs_sample_set(p, HfsConfig{}, 20, Rng(0x7a1b5u).child("time"));
        out.mean_tree_sweeps = run.mean_tree_sweeps();
        out.model = hfs_timing(out.raw, out.mean_tree_sweeps);
    } else {
        throw std::invalid_argument("unknown solver id '" + solver_id + "'");
    }
    return out;
}

}  // namespace ttt
