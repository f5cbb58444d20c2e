#include "ttt/solvers/multispin.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ttt {

std::string msa_solver_id(const SAParams& params) {
    char buf[32];
    snprintf(buf, sizeof buf, "msa:%d", params.sweeps);
    return buf;
}

uint64_t bernoulli_mask(double p, Rng& rng) {
    if (p >= 1.0) return ~0ull;
    if (p <= 0.0) return 0;
    // Bitwise comparison U < p per lane, most significant bit first: lanes
    // where the uniform's bit drops below p's bit are decided set, lanes
    // where it exceeds are decided clear, equal bits stay undecided.
    uint64_t result = 0;
    uint64_t undecided = ~0ull;
    for (int bit = 0; bit < 64 && undecided; ++bit) {
        p *= 2.0;
        uint64_t r = rng.next_u64();
        if (p >= 1.0) {
            p -= 1.0;
            result |= undecided & ~r;
            undecided &= r;
        } else {
            undecided &= ~r;
        }
    }
    return result;
}

namespace {

struct MsaState {
    // bit b of sigma[i] is replica b's spin at vertex i, set meaning -1
    std::vector<uint64_t> sigma;
    // per incident slot: neighbor index and the J-sign mask (~0 for J = +1)
    std::vector<uint32_t> nbr;
    std::vector<uint64_t> jmask;
    std::vector<uint32_t> offset;
};

MsaState build_state(const IsingProblem& p) {
    for (int32_t h : p.h)
        if (h != 0)
            throw std::invalid_argument(
                "multispin SA requires zero fields (got a nonzero h)");
    for (int32_t j : p.j)
        if (j != 1 && j != -1)
            throw std::invalid_argument(
                "multispin SA requires range-1 couplings (got |J| != 1)");

    const WorkingGraph& g = *p.graph;
    MsaState st;
    st.sigma.resize(g.num_active());
    st.offset.resize(g.num_active() + 1);
    size_t total = 0;
    for (uint32_t i = 0; i < g.num_active(); ++i) {
        st.offset[i] = uint32_t(total);
        total += g.adj_nbr(i).size();
    }
    st.offset[g.num_active()] = uint32_t(total);
    st.nbr.resize(total);
    st.jmask.resize(total);
    for (uint32_t i = 0; i < g.num_active(); ++i) {
        auto nbrs = g.adj_nbr(i);
        auto eids = g.adj_edge(i);
        for (size_t k = 0; k < nbrs.size(); ++k) {
            st.nbr[st.offset[i] + k] = nbrs[k];
            st.jmask[st.offset[i] + k] = p.j[eids[k]] > 0 ? ~0ull : 0ull;
        }
    }
    return st;
}

void run_schedule(MsaState& st, const SASchedule& schedule, int range, int64_t sweeps,
                  Rng& rng) {
    const uint32_t n = uint32_t(st.sigma.size());
    const double b0 = schedule.beta_start;
    const double b1 = schedule.beta_end;
    const double denom = schedule.scaled ? double(range) : 1.0;

    // acceptance probabilities for the uphill moves dE = 2l, l = 1..6
    double acc[7];
    for (int64_t sw = 0; sw < sweeps; ++sw) {
        double beta =
            sweeps == 1 ? b1 : b0 + (b1 - b0) * double(sw) / double(sweeps - 1);
        beta /= denom;
        for (int l = 1; l <= 6; ++l) acc[l] = std::exp(-2.0 * beta * double(l));

        for (uint32_t i = 0; i < n; ++i) {
            // bit-sliced count of violated incident edges (a violated edge
            // raises the energy, so many violations favor flipping)
            uint64_t c0 = 0, c1 = 0, c2 = 0;
            uint64_t si = st.sigma[i];
            for (uint32_t k = st.offset[i]; k < st.offset[i + 1]; ++k) {
                uint64_t v = st.jmask[k] ^ si ^ st.sigma[st.nbr[k]];
                uint64_t carry0 = c0 & v;
                c0 ^= v;
                uint64_t carry1 = c1 & carry0;
                c1 ^= carry0;
                c2 |= carry1;
            }
            int d = int(st.offset[i + 1] - st.offset[i]);
            // flipping changes the energy by 2(d - 2k) at k violations
            uint64_t accept = 0;
            for (int k = 0; k <= d; ++k) {
                uint64_t eq =
                    (k & 1 ? c0 : ~c0) & (k & 2 ? c1 : ~c1) & (k & 4 ? c2 : ~c2);
                int l = d - 2 * k;
                if (l <= 0) {
                    accept |= eq;
                } else if (eq) {
                    accept |= eq & bernoulli_mask(acc[l], rng);
                }
            }
            st.sigma[i] = si ^ accept;
        }
    }
}

}  // namespace

std::vector<std::pair<SpinConfig, int64_t>> multispin_sa_batch(const IsingProblem& p,
                                                               const SAParams& params,
                                                               Rng rng) {
    if (params.sweeps < 1) throw std::invalid_argument("sweep count must be >= 1");
    MsaState st = build_state(p);
    const uint32_t n = uint32_t(st.sigma.size());
    for (auto& w : st.sigma) w = rng.next_u64();
    run_schedule(st, params.schedule, p.range, params.sweeps, rng);

    // unpack, post-process, and score each replica
    CouplingTable table = make_coupling_table(p);
    std::vector<std::pair<SpinConfig, int64_t>> out;
    out.reserve(kMsaWordWidth);
    for (int b = 0; b < kMsaWordWidth; ++b) {
        SpinConfig s(n);
        for (uint32_t i = 0; i < n; ++i)
            s[i] = (st.sigma[i] >> b) & 1 ? int8_t(-1) : int8_t(1);
        greedy_descent_inplace(table, s);
        int64_t e = table_energy(table, s);
        out.emplace_back(std::move(s), e);
    }
    return out;
}

SampleSet msa_sample_set(const IsingProblem& p, const SAParams& params, int r, Rng rng,
                         const TimingModel& timing) {
    if (r < 1) throw std::invalid_argument("sample count must be >= 1");
    int batches = (r + kMsaWordWidth - 1) / kMsaWordWidth;
    SampleSet out;
    out.solver_id = msa_solver_id(params);
    out.timing = timing;
    for (int b = 0; b < batches; ++b) {
        auto replicas = multispin_sa_batch(p, params, rng.child(uint64_t(b)));
        for (auto& [config, energy] : replicas) {
            out.samples.push_back(Sample{energy, timing.t_a_ns, 0});
            out.configs.push_back(std::move(config));
        }
    }
    return out;
}

size_t msa_init_probe(const IsingProblem& p) {
    MsaState st = build_state(p);
    return st.nbr.size() + st.sigma.size();
}

void msa_sweep_probe(const IsingProblem& p, int64_t sweeps, Rng& rng) {
    MsaState st = build_state(p);
    for (auto& w : st.sigma) w = rng.next_u64();
    run_schedule(st, SASchedule{}, p.range, sweeps, rng);
}

}  // namespace ttt
