#include "ttt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttt {

namespace {

// round-half-up division of nonnegative integers
int64_t round_div(int64_t num, int64_t den) {
    return (num + den / 2) / den;
}

int64_t quantile_index(double q, int64_t n) {
    // 1-based k = max(1, round_half_up(q*N))
    return std::max<int64_t>(1, int64_t(std::floor(q * double(n) + 0.5)));
}

}  // namespace

std::string SolverStats::stt_display() const {
    char buf[64];
    if (censored) {
        snprintf(buf, sizeof buf, "> %lld", static_cast<long long>(n));
    } else {
        snprintf(buf, sizeof buf, "%.10g", stt());
    }
    return buf;
}

TargetSpec target_energy(const SampleSet& ref, double q) {
    if (ref.samples.empty()) throw std::invalid_argument("empty sample set");
    if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("quantile must be in (0, 1)");
    std::vector<int64_t> energies;
    energies.reserve(ref.samples.size());
    for (const auto& s : ref.samples) energies.push_back(s.energy);
    std::sort(energies.begin(), energies.end());
    int64_t k = quantile_index(q, int64_t(energies.size()));
    return TargetSpec{q, energies[size_t(k - 1)]};
}

SolverStats stt(const SampleSet& samples, const TargetSpec& t) {
    if (samples.samples.empty()) throw std::invalid_argument("empty sample set");
    SolverStats st;
    st.solver_id = samples.solver_id;
    st.q = t.q;
    st.target = t.e_q;
    st.n = int64_t(samples.samples.size());
    for (const auto& s : samples.samples)
        if (s.energy <= t.e_q) ++st.successes;
    st.censored = st.successes == 0;
    if (samples.has_batches()) {
        std::vector<char> hit(size_t(samples.num_batches), 0);
        for (const auto& s : samples.samples)
            if (s.energy <= t.e_q) hit[size_t(s.batch)] = 1;
        st.gb_n = samples.num_batches;
        st.gb_successes = std::count(hit.begin(), hit.end(), char(1));
    }
    return st;
}

double gauge_success(const SampleSet& samples, const TargetSpec& t, bool require_batches) {
    if (!samples.has_batches()) {
        if (require_batches)
            throw std::invalid_argument("sample set has no gauge-batch structure");
        return 1.0;  // software semantics
    }
    std::vector<char> hit(size_t(samples.num_batches), 0);
    for (const auto& s : samples.samples)
        if (s.energy <= t.e_q) hit[size_t(s.batch)] = 1;
    return double(std::count(hit.begin(), hit.end(), char(1))) / double(samples.num_batches);
}

SolverStats ttt(SolverStats stats, const TimingModel& timing) {
    // Censored records get the lower bound computed as if success arrived
    // exactly once; gauge counts are treated the same way.
    int64_t succ = stats.censored ? 1 : stats.successes;
    int64_t gb_succ = stats.gb_successes > 0 ? stats.gb_successes : 1;
    stats.ttt_anneal_ns = round_div(timing.t_a_ns * stats.n, succ);
    stats.ttt_total_ns = round_div(timing.t_i_ns * stats.gb_n, gb_succ) +
                         round_div((timing.t_a_ns + timing.t_r_ns) * stats.n, succ);
    return stats;
}

double batch_success(double p_t_hat, int w) {
    if (w < 1) throw std::invalid_argument("batch width must be >= 1");
    if (w == 1) return p_t_hat;
    return 1.0 - std::pow(1.0 - p_t_hat, w);
}

SolverStats estimate_external_ttt(const SolverStats& stats, int64_t sweeps,
                                  uint32_t n_active, const ExternalTiming& ext) {
    if (sweeps < 1 || n_active == 0)
        throw std::invalid_argument("external estimate needs sweep count and instance size");
    SolverStats out = stats;
    out.solver_id = "est:" + ext.id + ":" + stats.solver_id;
    out.sweeps = sweeps;
    double t_a = double(sweeps) * double(n_active) * ext.spin_flip_ns;
    double p = stats.censored ? 1.0 / double(stats.n) : stats.p_t_hat();
    double p_run = batch_success(p, ext.batch_width);
    double run_time = t_a * double(ext.batch_width);
    out.ttt_anneal_ns = llround(run_time / p_run);
    out.ttt_total_ns = ext.t_i_ns + out.ttt_anneal_ns;  // t_r = 0, p_g = 1
    return out;
}

namespace {

bool cv_less(const CensoredValue& a, const CensoredValue& b) {
    if (a.censored != b.censored) return b.censored;
    return a.value < b.value;
}

}  // namespace

MedianCi median_ci(std::vector<CensoredValue> values, double level) {
    if (values.empty()) throw std::invalid_argument("empty value list");
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("confidence level must be in (0, 1)");
    std::sort(values.begin(), values.end(), cv_less);
    int64_t n = int64_t(values.size());

    MedianCi out;
    if (n % 2 == 1) {
        out.median = values[size_t(n / 2)];
    } else {
        const auto& a = values[size_t(n / 2 - 1)];
        const auto& b = values[size_t(n / 2)];
        if (a.censored || b.censored) {
            // can't average into a censored bound; keep the lower one as a bound
            out.median = CensoredValue{a.value, true};
        } else {
            out.median = CensoredValue{(a.value + b.value) / 2.0, false};
        }
    }

    // F(k) = P(Binomial(n, 1/2) <= k) accumulated incrementally in log space
    double alpha = 1.0 - level;
    int64_t pick = 0;
    double log_half = -double(n) * std::log(2.0);
    double cdf_lm1 = std::exp(log_half);  // F(0)
    for (int64_t l = 1; l <= n / 2; ++l) {
        double lp = std::lgamma(double(n) + 1) - std::lgamma(double(l) + 1) -
                    std::lgamma(double(n - l) + 1) + log_half;
        double cdf_l = cdf_lm1 + std::exp(lp);
        if (cdf_l + cdf_lm1 <= alpha)
            pick = l;
        else
            break;  // the sum is increasing in l
        cdf_lm1 = cdf_l;
    }
    if (pick >= 1 && n - pick > pick) {
        out.l = int(pick);
        out.u = int(n - pick);
    } else {
        out.l = 1;  // full-range fallback for small n (degenerate at n = 1)
        out.u = int(n);
    }
    out.lo = values[size_t(out.l - 1)];
    out.hi = values[size_t(out.u - 1)];
    return out;
}

RatioSet relative_performance(std::vector<InputDuration> software,
                              std::vector<InputDuration> reference, double level) {
    auto by_input = [](const InputDuration& a, const InputDuration& b) {
        return a.input < b.input;
    };
    std::sort(software.begin(), software.end(), by_input);
    std::sort(reference.begin(), reference.end(), by_input);
    if (software.size() != reference.size())
        throw std::invalid_argument("software/reference input sets differ in size");

    RatioSet out;
    for (size_t i = 0; i < software.size(); ++i) {
        if (software[i].input != reference[i].input)
            throw std::invalid_argument("software/reference input ids do not match: " +
                                        software[i].input + " vs " + reference[i].input);
        if (reference[i].ns <= 0)
            throw std::invalid_argument("nonpositive reference duration for input " +
                                        reference[i].input);
        out.input.push_back(software[i].input);
        out.ratio.push_back(CensoredValue{
            double(software[i].ns) / double(reference[i].ns),
            software[i].censored || reference[i].censored});
    }
    out.aggregate = median_ci(out.ratio, level);
    return out;
}

const SolverStats& portfolio_best(std::span<const SolverStats> entries, Metric metric) {
    if (entries.empty()) throw std::invalid_argument("empty portfolio");

    auto value_of = [metric](const SolverStats& s) -> double {
        switch (metric) {
            case Metric::Stt: return s.stt();
            case Metric::TttAnneal: return double(s.ttt_anneal_ns);
            case Metric::TttTotal: return double(s.ttt_total_ns);
        }
        return 0.0;
    };

    const SolverStats* best = &entries[0];
    for (const auto& e : entries) {
        if (&e == best) continue;
        bool better;
        if (e.censored != best->censored) {
            better = !e.censored;
        } else if (value_of(e) != value_of(*best)) {
            better = value_of(e) < value_of(*best);
        } else if (e.sweeps != best->sweeps) {
            // Under STT the per-sample cost is ignored, so on equal success
            // rates the longer anneal is the established pick; under the TTT
            // selectors the cheaper parameterization wins.
            better = metric == Metric::Stt ? e.sweeps > best->sweeps
                                           : e.sweeps < best->sweeps;
        } else {
            better = e.solver_id < best->solver_id;
        }
        if (better) best = &e;
    }
    return *best;
}

}  // namespace ttt
