#include "ttt/solvers/reference.hpp"

#include <stdexcept>
#include <utility>

namespace ttt {

std::string reference_solver_id(const ReferenceConfig& cfg) {
    return "ref:" + cfg.inner.solver_id();
}

SampleSet reference_sample_run(const IsingProblem& p, const ReferenceConfig& cfg, Rng rng) {
    if (cfg.gauges < 1) throw std::invalid_argument("gauge count must be >= 1");
    if (cfg.samples_per_gauge < 1)
        throw std::invalid_argument("samples per gauge must be >= 1");

    SampleSet out;
    out.solver_id = reference_solver_id(cfg);
    out.timing = cfg.timing;
    out.num_batches = cfg.gauges;
    out.samples.reserve(size_t(cfg.gauges) * size_t(cfg.samples_per_gauge));

    for (int b = 0; b < cfg.gauges; ++b) {
        Rng batch_rng = rng.child(uint64_t(b));
        GaugeTransform g = random_gauge(*p.graph, batch_rng);
        IsingProblem gauged = apply_gauge(p, g);
        for (int i = 0; i < cfg.samples_per_gauge; ++i) {
            auto [config, e] = sa_sample(gauged, cfg.inner, batch_rng.child(uint64_t(i)));
            out.samples.push_back(Sample{e, cfg.timing.t_a_ns, b});
            out.configs.push_back(compose(g, config));
        }
    }
    return out;
}

}  // namespace ttt
