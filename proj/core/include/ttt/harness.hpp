#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttt/generators.hpp"
#include "ttt/sample.hpp"
#include "ttt/timing.hpp"

namespace ttt {

// ---------------------------------------------------------------------------
// Experiment configuration. The JSON schema mirrors these structs field for
// field; profiles provide the two shipped baselines and a config file (or
// CLI flags) overlays individual keys.
// ---------------------------------------------------------------------------

struct DefectConfig {
    int count = 0;              // randomly drawn inactive vertices on the parent
    std::vector<uint32_t> ids;  // explicit additional inactive vertex ids
};

struct ReferenceRunConfig {
    int gauges = 5;
    int samples_per_gauge = 100;
    int inner_sweeps = 1000;
    bool inner_scaled = false;
};

struct SolverGridConfig {
    // Defaults are desk-scale: one sweep setting per decade keeps smoke runs
    // fast and the sweep dimension well separated (adjacent full-grid settings
    // are statistically indistinguishable on small instances at this sample
    // budget). The paper profile installs the full production grid.
    std::vector<int> sa_sweeps = {10, 100, 1000, 10000};
    bool sa_unscaled = true;
    bool sa_scaled = true;
    bool msa = true;
    std::vector<int> msa_sweeps = {10, 100, 1000, 10000};
    bool hfs = true;
    int hfs_max_stall = 10;
    int samples_per_solver = 100;
    bool estimates = true;
};

struct ExperimentConfig {
    uint64_t seed = 1;
    std::string out = "bench-out";
    std::vector<std::string> classes = {"RAN1", "AC3-odd", "FL3"};
    std::vector<int> sizes = {2, 3, 4, 5, 6};
    int instances_per_cell = 20;
    int parent_size = 0;  // 0 means max(sizes)
    DefectConfig defects;
    std::vector<double> quantiles = {0.01, 0.1};
    ReferenceRunConfig reference;
    SolverGridConfig solvers;

    int effective_parent_size() const;
};

// Shipped baselines: desk completes in minutes on one core; paper mirrors the
// full protocol (6 classes, C4-C12, 100 instances, 50x1000 reference,
// quantiles 0.001/0.01/0.1, 1000 samples per solver, 55-defect C12 parent).
ExperimentConfig desk_profile();
ExperimentConfig paper_profile();
ExperimentConfig profile_by_name(const std::string& name);  // throws on unknown

std::string config_to_json(const ExperimentConfig& cfg);
// Applies the keys present in `text` (JSON object) on top of cfg; unknown
// keys are errors.
void overlay_config_json(ExperimentConfig& cfg, const std::string& text);
void validate_config(const ExperimentConfig& cfg);  // throws invalid_argument

// ---------------------------------------------------------------------------
// Output layout under cfg.out.
// ---------------------------------------------------------------------------

std::string config_file(const ExperimentConfig& cfg);
std::string timings_file(const ExperimentConfig& cfg);
std::string results_file(const ExperimentConfig& cfg);
std::string report_csv_file(const ExperimentConfig& cfg);
std::string report_json_file(const ExperimentConfig& cfg);
std::string instance_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                          int size, int index);
std::string reference_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                           int size, int index);
std::string targets_file(const ExperimentConfig& cfg, const GeneratorSpec& spec,
                         int size, int index);

// The working graph instances at `size` live on: the (possibly defect-carrying)
// parent restricted to its upper-left size x size cells.
WorkingGraph working_graph_for_size(const ExperimentConfig& cfg, int size);

// ---------------------------------------------------------------------------
// Pipeline stages. Each is deterministic given (config, out-dir contents).
// ---------------------------------------------------------------------------

// Writes instances plus the resolved config.json.
void cmd_generate(const ExperimentConfig& cfg);
// Reference sample runs and target files for every instance.
void cmd_reference(const ExperimentConfig& cfg);
// Re-derives target files from persisted reference samples.
void cmd_targets(const ExperimentConfig& cfg);
// Solver grid, metrics, portfolios; appends records to results.jsonl.
// resume keeps completed instances from an interrupted earlier run.
void cmd_run(const ExperimentConfig& cfg, bool resume = false);
// Aggregates results.jsonl into report.csv and report.json (pure).
void cmd_report(const ExperimentConfig& cfg);

// One-off exclusive timing of one solver id on one instance file.
struct TimeCmdResult {
    std::string solver_id;
    TimingModel model;
    SolverTimings raw;
    double mean_tree_sweeps = 0.0;  // hfs only
};
TimeCmdResult cmd_time(const std::string& solver_id, const std::string& instance_path);

}  // namespace ttt
