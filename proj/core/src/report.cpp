#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "ttt/harness.hpp"
#include "ttt/io.hpp"
#include "ttt/metrics.hpp"
#include "ttt/solvers/multispin.hpp"
#include "ttt/solvers/sa.hpp"

namespace ttt {

using ojson = nlohmann::ordered_json;

namespace {

// metric rank orders report rows: per-sample cost first, then anneal, total
constexpr int kStt = 0, kAnneal = 1, kTotal = 2;

const char* metric_label(int rank) {
    switch (rank) {
        case kStt: return "stt";
        case kAnneal: return "ttt_anneal_ns";
        case kTotal: return "ttt_total_ns";
    }
    return "";
}

int metric_rank(const std::string& label) {
    if (label == "stt") return kStt;
    if (label == "ttt_anneal_ns") return kAnneal;
    if (label == "ttt_total_ns") return kTotal;
    throw std::runtime_error("unknown metric '" + label + "' in results");
}

// (class, size, solver, quantile, metric)
using RowKey = std::tuple<std::string, int, std::string, double, int>;
// (class, size, solver)
using CellKey = std::tuple<std::string, int, std::string>;

struct RowAgg {
    std::vector<std::pair<int, CensoredValue>> values;  // (instance, value)
};

std::string input_id(const std::string& cls, int size, int instance) {
    char buf[32];
    snprintf(buf, sizeof buf, "/C%d/%03d", size, instance);
    return cls + buf;
}

std::string csv_value(const CensoredValue& v) {
    std::string text = format_double(v.value);
    return v.censored ? ">" + text : text;
}

// Expected coverage per class, derived from the config: every listed solver
// must have a stats or skip record for every instance before the cell enters
// the aggregates.
struct Expected {
    std::set<std::string> solvers;
    std::set<std::string> portfolios;
};

bool class_msa_eligible(const GeneratorSpec& spec) {
    return spec.family == GeneratorSpec::Family::Ran && spec.range == 1;
}

Expected expected_for_class(const ExperimentConfig& cfg, const GeneratorSpec& spec) {
    Expected e;
    const SolverGridConfig& s = cfg.solvers;
    std::vector<std::string> sa_ids;
    for (bool scaled : {false, true}) {
        if (scaled ? !s.sa_scaled : !s.sa_unscaled) continue;
        for (int sweeps : s.sa_sweeps) {
            SAParams p;
            p.sweeps = sweeps;
            p.schedule.scaled = scaled;
            sa_ids.push_back(p.solver_id());
        }
    }
    e.solvers.insert(sa_ids.begin(), sa_ids.end());
    if (!sa_ids.empty()) e.portfolios.insert("portfolio:sa");
    if (s.msa) {
        for (int sweeps : s.msa_sweeps) {
            SAParams p;
            p.sweeps = sweeps;
            e.solvers.insert(msa_solver_id(p));
        }
        if (class_msa_eligible(spec)) e.portfolios.insert("portfolio:msa");
    }
    if (s.hfs) {
        e.solvers.insert("hfs:tw4");
        e.portfolios.insert("portfolio:hfs");
    }
    {
        SAParams inner;
        inner.sweeps = cfg.reference.inner_sweeps;
        inner.schedule.scaled = cfg.reference.inner_scaled;
        e.solvers.insert("ref:" + inner.solver_id());
    }
    if (s.estimates && !sa_ids.empty()) {
        for (const std::string& id : sa_ids) {
            e.solvers.insert("est:an_ss_ge_fi:" + id);
            e.solvers.insert("est:an_ms_r1_nf:" + id);
        }
        e.portfolios.insert("portfolio:est");
    }
    if (!sa_ids.empty() || s.msa || s.hfs) e.portfolios.insert("portfolio:best");
    return e;
}

// A skip record covers one solver id or, with a trailing ":*", a family of ids.
bool skip_covers(const std::string& skip_solver, const std::string& id) {
    if (skip_solver == id) return true;
    if (skip_solver.size() >= 2 && skip_solver.compare(skip_solver.size() - 2, 2, ":*") == 0)
        return id.compare(0, skip_solver.size() - 1, skip_solver, 0,
                          skip_solver.size() - 1) == 0;
    return false;
}

int64_t json_ns(const ojson& v) {
    return v.is_number_integer() ? v.get<int64_t>() : llround(v.get<double>());
}

}  // namespace

void cmd_report(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::ifstream is(results_file(cfg), std::ios::binary);
    if (!is)
        throw std::runtime_error("no results at " + results_file(cfg) +
                                 " (run the run stage first)");

    std::map<RowKey, RowAgg> agg;
    std::map<std::tuple<std::string, int, std::string, std::string>, std::set<int>> skips;
    std::map<CellKey, std::set<int>> covered;
    // skip rows kept separately: wildcard entries cover whole id families
    std::map<std::pair<std::string, int>,
             std::vector<std::pair<std::string, std::set<int>>>>
        skip_cover;
    std::map<std::tuple<std::string, int, double, int>, std::vector<InputDuration>>
        best_ttt, ref_ttt;

    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ojson j = ojson::parse(line);
        const std::string kind = j.value("kind", "");
        if (kind == "header") {
            if (j.value("schema", 0) != 1)
                throw std::runtime_error("unsupported results schema version");
            saw_header = true;
            continue;
        }
        const std::string cls = j.at("class").get<std::string>();
        const int size = j.at("size").get<int>();
        const int instance = j.at("instance").get<int>();
        if (kind == "instance_done") continue;
        if (kind == "skip") {
            const std::string solver = j.at("solver").get<std::string>();
            skips[{cls, size, solver, j.at("reason").get<std::string>()}].insert(instance);
            auto& entries = skip_cover[{cls, size}];
            auto it = std::find_if(entries.begin(), entries.end(),
                                   [&](const auto& e) { return e.first == solver; });
            if (it == entries.end()) {
                entries.emplace_back(solver, std::set<int>{instance});
            } else {
                it->second.insert(instance);
            }
            continue;
        }
        if (kind == "stats") {
            const std::string solver = j.at("solver").get<std::string>();
            const double q = j.at("q").get<double>();
            const bool censored = j.at("censored").get<bool>();
            const int64_t n = j.at("n").get<int64_t>();
            const int64_t successes = j.at("successes").get<int64_t>();
            const int64_t anneal = json_ns(j.at("ttt_anneal_ns"));
            const int64_t total = json_ns(j.at("ttt_total_ns"));
            covered[{cls, size, solver}].insert(instance);
            const double stt_value =
                censored ? double(n) : double(n) / double(successes);
            agg[{cls, size, solver, q, kStt}].values.push_back(
                {instance, CensoredValue{stt_value, censored}});
            agg[{cls, size, solver, q, kAnneal}].values.push_back(
                {instance, CensoredValue{double(anneal), censored}});
            agg[{cls, size, solver, q, kTotal}].values.push_back(
                {instance, CensoredValue{double(total), censored}});
            if (solver.rfind("ref:", 0) == 0) {
                std::string id = input_id(cls, size, instance);
                ref_ttt[{cls, size, q, kAnneal}].push_back({id, anneal, censored});
                ref_ttt[{cls, size, q, kTotal}].push_back({id, total, censored});
            }
            continue;
        }
        if (kind == "portfolio") {
            const std::string family = j.at("family").get<std::string>();
            const std::string solver = "portfolio:" + family;
            const double q = j.at("q").get<double>();
            const int rank = metric_rank(j.at("metric").get<std::string>());
            const bool censored = j.at("censored").get<bool>();
            const double value = j.at("value").get<double>();
            covered[{cls, size, solver}].insert(instance);
            agg[{cls, size, solver, q, rank}].values.push_back(
                {instance, CensoredValue{value, censored}});
            if (family == "best" && rank != kStt)
                best_ttt[{cls, size, q, rank}].push_back(
                    {input_id(cls, size, instance), json_ns(j.at("value")), censored});
            continue;
        }
        throw std::runtime_error("unknown results record kind '" + kind + "'");
    }
    if (!saw_header) throw std::runtime_error("results file has no header record");

    // completeness: every expected solver id must cover all instances of a cell
    auto coverage = [&](const std::string& cls, int size, const std::string& id) {
        std::set<int> got;
        if (auto it = covered.find({cls, size, id}); it != covered.end()) got = it->second;
        if (auto it = skip_cover.find({cls, size}); it != skip_cover.end())
            for (const auto& [skip_solver, instances] : it->second)
                if (skip_covers(skip_solver, id))
                    got.insert(instances.begin(), instances.end());
        return int(got.size());
    };

    std::set<CellKey> dropped;
    ojson dropped_json = ojson::array();
    for (const std::string& c : cfg.classes) {
        GeneratorSpec spec = GeneratorSpec::parse(c);
        std::string cls = spec.to_string();
        Expected e = expected_for_class(cfg, spec);
        for (int size : cfg.sizes) {
            auto check = [&](const std::string& id) {
                int present = coverage(cls, size, id);
                if (present >= cfg.instances_per_cell) return;
                dropped.insert({cls, size, id});
                dropped_json.push_back(ojson{{"class", cls},
                                             {"size", size},
                                             {"solver", id},
                                             {"present", present}});
            };
            for (const std::string& id : e.solvers) check(id);
            for (const std::string& id : e.portfolios) check(id);
        }
    }

    // aggregate rows, sorted by (class, size, solver, quantile, metric)
    struct OutRow {
        int n = 0;
        int censored = 0;
        MedianCi ci;
    };
    std::map<RowKey, OutRow> rows;
    for (auto& [key, a] : agg) {
        const auto& [cls, size, solver, q, rank] = key;
        if (dropped.count({cls, size, solver})) continue;
        std::sort(a.values.begin(), a.values.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<CensoredValue> vals;
        vals.reserve(a.values.size());
        OutRow row;
        for (const auto& [inst, v] : a.values) {
            vals.push_back(v);
            row.censored += v.censored ? 1 : 0;
        }
        row.n = int(vals.size());
        row.ci = median_ci(std::move(vals));
        rows.emplace(key, std::move(row));
    }

    // speedup rows: best in-house portfolio against the reference run
    ojson relperf_json = ojson::array();
    for (const auto& [key, software] : best_ttt) {
        const auto& [cls, size, q, rank] = key;
        auto it = ref_ttt.find(key);
        if (it == ref_ttt.end()) continue;
        if (dropped.count({cls, size, "portfolio:best"})) continue;
        RatioSet rs = relative_performance(software, it->second);
        OutRow row;
        row.n = int(rs.ratio.size());
        for (const CensoredValue& v : rs.ratio) row.censored += v.censored ? 1 : 0;
        row.ci = rs.aggregate;
        rows.emplace(RowKey{cls, size, "relperf:best", q, rank}, std::move(row));
    }

    // write report.csv
    {
        std::ofstream os(report_csv_file(cfg), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + report_csv_file(cfg));
        os << "class,size,solver,quantile,metric,n,censored,median,ci_lo,ci_hi\n";
        for (const auto& [key, row] : rows) {
            const auto& [cls, size, solver, q, rank] = key;
            os << cls << ',' << size << ',' << solver << ',' << format_double(q) << ','
               << metric_label(rank) << ',' << row.n << ',' << row.censored << ','
               << csv_value(row.ci.median) << ',' << csv_value(row.ci.lo) << ','
               << csv_value(row.ci.hi) << '\n';
        }
    }

    // write report.json
    ojson cells = ojson::array();
    for (const auto& [key, row] : rows) {
        const auto& [cls, size, solver, q, rank] = key;
        ojson cell{{"class", cls},
                   {"size", size},
                   {"solver", solver},
                   {"quantile", q},
                   {"metric", metric_label(rank)},
                   {"n", row.n},
                   {"censored", row.censored},
                   {"median", row.ci.median.value},
                   {"median_censored", row.ci.median.censored},
                   {"ci_lo", row.ci.lo.value},
                   {"ci_hi", row.ci.hi.value},
                   {"ci_order_stats", ojson::array({row.ci.l, row.ci.u})}};
        if (solver.rfind("relperf:", 0) == 0)
            relperf_json.push_back(std::move(cell));
        else
            cells.push_back(std::move(cell));
    }
    ojson skips_json = ojson::array();
    for (const auto& [key, instances] : skips) {
        const auto& [cls, size, solver, reason] = key;
        skips_json.push_back(ojson{{"class", cls},
                                   {"size", size},
                                   {"solver", solver},
                                   {"reason", reason},
                                   {"instances", std::vector<int>(instances.begin(),
                                                                  instances.end())}});
    }
    ojson j{{"schema", 1},
            {"cells", std::move(cells)},
            {"relative_performance", std::move(relperf_json)},
            {"skips", std::move(skips_json)},
            {"completeness", ojson{{"instances_per_cell", cfg.instances_per_cell},
                                   {"dropped_cells", std::move(dropped_json)}}}};
    std::ofstream os(report_json_file(cfg), std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + report_json_file(cfg));
    os << j.dump(2) << "\n";
}

}  // namespace ttt
