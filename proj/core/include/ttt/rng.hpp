#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ttt {

// Mixing function of the splitmix64 generator. Used both as the seed
// expander for stream state and as the hash behind child-stream derivation,
// so every random quantity in the suite is a pure function of a 64-bit seed
// and a derivation path.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seedable, splittable stream generator: xoshiro256++ state expanded from a
// 64-bit seed via splitmix64. Child streams are derived by hashing
// (seed, tag), never by consuming parent state, so derivation paths are
// stable no matter how many draws happened in between.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t seed() const { return seed_; }

    Rng child(uint64_t tag) const {
        uint64_t sm = seed_ ^ (tag + 0x9e3779b97f4a7c15ull);
        uint64_t derived = splitmix64(sm);
        return Rng(derived);
    }

    Rng child(std::string_view tag) const { return child(fnv1a(tag)); }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased uniform draw from [0, n) by rejection.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1) with 53 random bits.
    double real01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform over {-1, +1}.
    int8_t pm1() { return (next_u64() >> 63) ? int8_t(1) : int8_t(-1); }

    bool coin() { return (next_u64() >> 63) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    static uint64_t fnv1a(std::string_view s) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= uint8_t(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t seed_;
    uint64_t s_[4];
};

}  // namespace ttt
