// Microbenchmarks for the solver kernels. These track the hot loops the
// timing calibration measures: scalar SA sweeps, word-parallel msa sweeps,
// tree optimization passes, and the energy evaluations behind them.

#include <benchmark/benchmark.h>

#include <memory>

#include "ttt/chimera.hpp"
#include "ttt/generators.hpp"
#include "ttt/ising.hpp"
#include "ttt/solvers/hfs.hpp"
#include "ttt/solvers/multispin.hpp"
#include "ttt/solvers/sa.hpp"

using namespace ttt;

namespace {

const IsingProblem& ran1_c6() {
    static GeneratedInstance gi = [] {
        auto g = std::make_shared<const WorkingGraph>(build_chimera(6));
        return gen_ran(g, 1, Rng(7));
    }();
    return gi.problem;
}

}  // namespace

static void BM_EnergyEval(benchmark::State& state) {
    const IsingProblem& p = ran1_c6();
    Rng rng(11);
    SpinConfig s = random_config(*p.graph, rng);
    for (auto _ : state) benchmark::DoNotOptimize(energy(p, s));
    state.SetItemsProcessed(state.iterations() * int64_t(p.num_spins()));
}
BENCHMARK(BM_EnergyEval);

static void BM_SaSweeps(benchmark::State& state) {
    const IsingProblem& p = ran1_c6();
    CouplingTable table = make_coupling_table(p);
    SAParams params;
    params.sweeps = state.range(0);
    Rng rng(11);
    SpinConfig s = random_config(*p.graph, rng);
    for (auto _ : state) {
        sa_anneal(table, params, p.range, rng, s);
        benchmark::DoNotOptimize(s.data());
    }
    // spin updates attempted per second
    state.SetItemsProcessed(state.iterations() * params.sweeps * int64_t(p.num_spins()));
}
BENCHMARK(BM_SaSweeps)->Arg(64)->Arg(1024);

static void BM_MsaWordSweeps(benchmark::State& state) {
    const IsingProblem& p = ran1_c6();
    Rng rng(11);
    const int64_t sweeps = state.range(0);
    for (auto _ : state) msa_sweep_probe(p, sweeps, rng);
    // 64 replicas advance per word sweep
    state.SetItemsProcessed(state.iterations() * sweeps * 64 * int64_t(p.num_spins()));
}
BENCHMARK(BM_MsaWordSweeps)->Arg(64);

static void BM_HfsTreeOptimize(benchmark::State& state) {
    const IsingProblem& p = ran1_c6();
    HfsState st = make_hfs_state(p);
    Rng rng(11);
    SpinConfig s = random_config(*p.graph, rng);
    for (auto _ : state) {
        std::vector<uint32_t> selected = draw_maximal_tree(st.cg, rng);
        optimize_tree(p, st, selected, s);
        benchmark::DoNotOptimize(s.data());
    }
}
BENCHMARK(BM_HfsTreeOptimize);

static void BM_GreedyDescent(benchmark::State& state) {
    const IsingProblem& p = ran1_c6();
    CouplingTable table = make_coupling_table(p);
    Rng rng(11);
    for (auto _ : state) {
        state.PauseTiming();
        SpinConfig s = random_config(*p.graph, rng);
        state.ResumeTiming();
        benchmark::DoNotOptimize(greedy_descent_inplace(table, s));
    }
}
BENCHMARK(BM_GreedyDescent);

BENCHMARK_MAIN();
