#include "ttt/solvers/sa.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace ttt {

std::string SAParams::solver_id() const {
    char buf[48];
    snprintf(buf, sizeof buf, "sa:%d:%s", sweeps, schedule.scaled ? "scaled" : "unscaled");
    return buf;
}

int64_t table_energy(const CouplingTable& t, const SpinConfig& s) {
    int64_t twice_coupling = 0, field = 0;
    for (uint32_t i = 0; i < t.num_spins(); ++i) {
        field += int64_t(t.hval[i]) * s[i];
        int64_t local = 0;
        for (uint32_t k = t.offset[i]; k < t.offset[i + 1]; ++k)
            local += int64_t(t.jval[k]) * s[t.nbr[k]];
        twice_coupling += local * s[i];
    }
    return field + twice_coupling / 2;
}

namespace {

// Per-sweep memo of acceptance probabilities, keyed by the positive energy
// gain m where dE = 2m. Entries are recomputed lazily when the sweep stamp
// moves on.
struct AcceptTable {
    std::vector<double> prob;
    std::vector<int32_t> stamp;
    double beta = 0.0;
    int32_t sweep = -1;

    explicit AcceptTable(size_t max_m) : prob(max_m + 1, 0.0), stamp(max_m + 1, -1) {}

    void new_sweep(int32_t s, double b) {
        sweep = s;
        beta = b;
    }
    double operator()(int64_t m) {
        auto i = size_t(m);
        if (stamp[i] != sweep) {
            prob[i] = std::exp(-2.0 * beta * double(m));
            stamp[i] = sweep;
        }
        return prob[i];
    }
};

size_t max_field_magnitude(const CouplingTable& t) {
    int64_t best = 1;
    for (uint32_t i = 0; i < t.num_spins(); ++i) {
        int64_t m = std::abs(int64_t(t.hval[i]));
        for (uint32_t k = t.offset[i]; k < t.offset[i + 1]; ++k)
            m += std::abs(int64_t(t.jval[k]));
        best = std::max(best, m);
    }
    return size_t(best);
}

}  // namespace

void sa_anneal(const CouplingTable& t, const SAParams& params, int range, Rng& rng,
               SpinConfig& s) {
    if (params.sweeps < 1) throw std::invalid_argument("sweep count must be >= 1");
    if (params.schedule.beta_start <= 0.0 ||
        params.schedule.beta_start >= params.schedule.beta_end)
        throw std::invalid_argument("schedule needs 0 < beta_start < beta_end");
    if (s.size() != t.num_spins()) throw std::invalid_argument("config shape mismatch");

    const double denom = params.schedule.scaled ? double(range) : 1.0;
    const double b0 = params.schedule.beta_start;
    const double b1 = params.schedule.beta_end;
    const int sweeps = params.sweeps;
    const uint32_t n = t.num_spins();

    AcceptTable accept(max_field_magnitude(t));
    for (int sw = 0; sw < sweeps; ++sw) {
        double beta = sweeps == 1 ? b1 : b0 + (b1 - b0) * double(sw) / double(sweeps - 1);
        accept.new_sweep(sw, beta / denom);
        for (uint32_t i = 0; i < n; ++i) {
            int64_t field = t.hval[i];
            for (uint32_t k = t.offset[i]; k < t.offset[i + 1]; ++k)
                field += int64_t(t.jval[k]) * s[t.nbr[k]];
            int64_t m = int64_t(s[i]) * field;  // dE of flipping = -2m
            if (m >= 0) {
                s[i] = int8_t(-s[i]);
            } else if (rng.real01() < accept(-m)) {
                s[i] = int8_t(-s[i]);
            }
        }
    }
}

std::pair<SpinConfig, int64_t> sa_sample(const IsingProblem& p, const SAParams& params,
                                         Rng rng) {
    CouplingTable t = make_coupling_table(p);
    SpinConfig s = random_config(*p.graph, rng);
    sa_anneal(t, params, p.range, rng, s);
    greedy_descent_inplace(t, s);
    int64_t e = table_energy(t, s);
    return {std::move(s), e};
}

SampleSet sa_sample_set(const IsingProblem& p, const SAParams& params, int r, Rng rng,
                        const TimingModel& timing) {
    if (r < 1) throw std::invalid_argument("sample count must be >= 1");
    CouplingTable t = make_coupling_table(p);
    SampleSet out;
    out.solver_id = params.solver_id();
    out.timing = timing;
    out.samples.reserve(size_t(r));
    out.configs.reserve(size_t(r));
    for (int k = 0; k < r; ++k) {
        Rng stream = rng.child(uint64_t(k));
        SpinConfig s = random_config(*p.graph, stream);
        sa_anneal(t, params, p.range, stream, s);
        greedy_descent_inplace(t, s);
        out.samples.push_back(Sample{table_energy(t, s), timing.t_a_ns, 0});
        out.configs.push_back(std::move(s));
    }
    return out;
}

}  // namespace ttt
