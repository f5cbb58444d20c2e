#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "ttt/ising.hpp"
#include "ttt/rng.hpp"

namespace ttt {

// Parsed form of a problem-class string: RAN<r>, AC<k>[-odd], FL<r>[:a=<alpha>].
struct GeneratorSpec {
    enum class Family { Ran, Ac, Fl };

    Family family = Family::Ran;
    int range = 1;             // r: weight bound (RAN, FL); AC instances use max(1, k)
    int k = 3;                 // AC inter-cell multiplier, odd
    bool odd_fields = false;   // AC: add +-1 fields on even-coupling-sum vertices
    double alpha = 0.25;       // FL: constraint-to-qubit ratio

    static GeneratorSpec parse(const std::string& text);
    std::string to_string() const;
    // to_string with characters unsafe in paths replaced (':' -> '_')
    std::string dir_name() const;
};

struct GeneratedInstance {
    IsingProblem problem;
    std::optional<SpinConfig> planted_config;
    std::optional<int64_t> planted_energy;
};

// h = 0 everywhere; every J uniform over the 2r nonzero integers in [-r, r].
GeneratedInstance gen_ran(std::shared_ptr<const WorkingGraph> g, int r, Rng rng);

// In-cell J uniform over {-1,+1}; inter-cell J uniform over {-k,+k} with k
// odd. With odd_fields, every vertex whose incident signed coupling values
// sum to an even number gets h uniform over {-1,+1}; all other h stay 0.
GeneratedInstance gen_ac(std::shared_ptr<const WorkingGraph> g, int k, bool odd_fields,
                         Rng rng);

// Frustrated-loop instance: m = round(alpha * n_active) cycle constraints,
// each a random-walk cycle of length >= 8 with one +1 coupling and the rest
// -1, summed into J under the bound |J| <= r (loops that would exceed it are
// redrawn). h = 0. The all-up configuration attains the exact ground energy
// sum(2 - L_j) because every loop is independently minimized there.
GeneratedInstance gen_fl(std::shared_ptr<const WorkingGraph> g, int r, double alpha,
                         Rng rng);

GeneratedInstance generate(std::shared_ptr<const WorkingGraph> g, const GeneratorSpec& spec,
                           Rng rng);

}  // namespace ttt
