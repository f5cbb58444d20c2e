// bench: drives the pipeline end to end.
//
//   bench generate   write instances (and the resolved config) under --out
//   bench reference  reference sample runs + target energies per instance
//   bench targets    re-derive target files from saved reference samples
//   bench run        solver grid, metrics, portfolios -> results.jsonl
//   bench report     aggregate results.jsonl -> report.csv / report.json
//   bench time       timing model for one solver id on one instance
//
// Config resolution: --profile names a baseline (desk | paper); without it a
// previously generated <out>/config.json is picked up, else desk. A --config
// file overlays individual keys; --seed and --out override last.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ttt/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CommonOpts {
    std::string profile;
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--profile", o.profile, "configuration baseline: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--config", o.config_path,
                    "JSON file overlaying individual config keys")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed (overrides config)");
    cmd->add_option("--out", o.out, "output directory (overrides config)");
}

ttt::ExperimentConfig resolve(const CommonOpts& o) {
    ttt::ExperimentConfig cfg = ttt::desk_profile();
    if (!o.profile.empty()) {
        cfg = ttt::profile_by_name(o.profile);
    } else {
        std::string out_hint = o.out ? *o.out : cfg.out;
        std::string saved = out_hint + "/config.json";
        if (std::filesystem::exists(saved)) ttt::overlay_config_json(cfg, slurp(saved));
    }
    if (!o.config_path.empty()) ttt::overlay_config_json(cfg, slurp(o.config_path));
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.out = *o.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chimera Ising benchmark pipeline"};
    app.require_subcommand(1);

    CommonOpts gen_o, ref_o, tgt_o, run_o, rep_o;
    bool resume = false;
    std::string time_solver, time_instance;

    CLI::App* gen = app.add_subcommand("generate", "write problem instances");
    add_common(gen, gen_o);
    CLI::App* ref = app.add_subcommand("reference", "reference runs and targets");
    add_common(ref, ref_o);
    CLI::App* tgt = app.add_subcommand("targets", "recompute targets from saved samples");
    add_common(tgt, tgt_o);
    CLI::App* run = app.add_subcommand("run", "run the solver grid and score it");
    add_common(run, run_o);
    run->add_flag("--resume", resume, "keep completed instances from a previous run");
    CLI::App* rep = app.add_subcommand("report", "aggregate results into reports");
    add_common(rep, rep_o);
    CLI::App* tim = app.add_subcommand("time", "timing model for one solver id");
    tim->add_option("--solver", time_solver, "solver id, e.g. sa:1000:unscaled")
        ->required();
    tim->add_option("--instance", time_instance, "instance file (.ising)")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            ttt::ExperimentConfig cfg = resolve(gen_o);
            ttt::cmd_generate(cfg);
            printf("wrote %zu x %zu x %d instances under %s/instances\n",
                   cfg.classes.size(), cfg.sizes.size(), cfg.instances_per_cell,
                   cfg.out.c_str());
        } else if (ref->parsed()) {
            ttt::ExperimentConfig cfg = resolve(ref_o);
            ttt::cmd_reference(cfg);
            printf("wrote reference samples and targets under %s\n", cfg.out.c_str());
        } else if (tgt->parsed()) {
            ttt::ExperimentConfig cfg = resolve(tgt_o);
            ttt::cmd_targets(cfg);
            printf("wrote targets under %s/targets\n", cfg.out.c_str());
        } else if (run->parsed()) {
            ttt::ExperimentConfig cfg = resolve(run_o);
            ttt::cmd_run(cfg, resume);
            printf("wrote %s\n", ttt::results_file(cfg).c_str());
        } else if (rep->parsed()) {
            ttt::ExperimentConfig cfg = resolve(rep_o);
            ttt::cmd_report(cfg);
            printf("wrote %s and %s\n", ttt::report_csv_file(cfg).c_str(),
                   ttt::report_json_file(cfg).c_str());
        } else if (tim->parsed()) {
            ttt::TimeCmdResult r = ttt::cmd_time(time_solver, time_instance);
            nlohmann::ordered_json j{{"solver", r.solver_id},
                                     {"t_i_ns", r.model.t_i_ns},
                                     {"t_a_ns", r.model.t_a_ns},
                                     {"t_r_ns", r.model.t_r_ns},
                                     {"t_s_ns", r.model.t_s_ns()}};
            if (r.mean_tree_sweeps > 0.0) j["mean_tree_sweeps"] = r.mean_tree_sweeps;
            printf("%s\n", j.dump(2).c_str());
        }
    } catch (const std::exception& e) {
        fprintf(stderr, "bench: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
