#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ttt/rng.hpp"

using namespace ttt;

// Reference values were produced by an independent implementation of
// splitmix64 / xoshiro256++ and are frozen here.

TEST_CASE("splitmix64 reference sequence from state 0") {
    uint64_t state = 0;
    CHECK(splitmix64(state) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ull);
    CHECK(splitmix64(state) == 0x06c45d188009454full);
}

TEST_CASE("xoshiro256++ streams match the reference sequences") {
    Rng a(12345);
    CHECK(a.next_u64() == 0x8d948a82def8a568ull);
    CHECK(a.next_u64() == 0x3477f953796702a0ull);
    CHECK(a.next_u64() == 0x15caa2fce6db8d69ull);
    CHECK(a.next_u64() == 0x2cef8853c20c6dd0ull);
    CHECK(a.next_u64() == 0x43ff3fff9c039cd9ull);

    Rng z(0);
    CHECK(z.next_u64() == 0x53175d61490b23dfull);
    CHECK(z.next_u64() == 0x61da6f3dc380d507ull);
    CHECK(z.next_u64() == 0x5c0fdf91ec9a7bfcull);
}

TEST_CASE("child streams derive from the construction seed") {
    Rng a(12345);
    Rng c = a.child(7);
    CHECK(c.next_u64() == 0x746b06afcc9bfbe3ull);
    CHECK(c.next_u64() == 0x6b6a68268b9c4d7full);

    SUBCASE("independent of how much the parent has drawn") {
        Rng fresh(12345);
        Rng drained(12345);
        for (int i = 0; i < 100; ++i) drained.next_u64();
        Rng c1 = fresh.child(7);
        Rng c2 = drained.child(7);
        for (int i = 0; i < 5; ++i) CHECK(c1.next_u64() == c2.next_u64());
    }
}

TEST_CASE("string tags hash with FNV-1a") {
    CHECK(Rng::fnv1a("generate") == 0x969e32f351f19272ull);
    Rng c = Rng(12345).child("generate");
    CHECK(c.next_u64() == 0xa5a111b0d5b6b597ull);
    CHECK(c.next_u64() == 0xb9e704367299e94full);
    // equivalent to the numeric tag it hashes to
    Rng d = Rng(12345).child(Rng::fnv1a("generate"));
    CHECK(d.next_u64() == 0xa5a111b0d5b6b597ull);
}

TEST_CASE("real01 uses the top 53 bits") {
    Rng a(1);
    Rng b(1);
    uint64_t u = a.next_u64();
    CHECK(u == 0xcfc5d07f6f03c29bull);
    double expected = double(u >> 11) * 0x1.0p-53;
    CHECK(b.real01() == expected);
    CHECK(expected == doctest::Approx(0.8116121588818848).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        double x = a.real01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("below is in range and roughly uniform") {
    Rng a(77);
    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) {
        uint64_t v = a.below(7);
        REQUIRE(v < 7);
        ++counts[size_t(v)];
    }
    for (int c : counts) {
        CHECK(c > 9500);  // expectation 10000, generous band
        CHECK(c < 10500);
    }
}

TEST_CASE("pm1 and coin hit both values") {
    Rng a(3);
    int plus = 0, minus = 0, heads = 0;
    for (int i = 0; i < 1000; ++i) {
        int8_t v = a.pm1();
        REQUIRE((v == 1 || v == -1));
        (v == 1 ? plus : minus)++;
        if (a.coin()) ++heads;
    }
    CHECK(plus > 400);
    CHECK(minus > 400);
    CHECK(heads > 400);
    CHECK(heads < 600);
}

TEST_CASE("shuffle permutes") {
    Rng a(9);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> orig = v;
    a.shuffle(v);
    CHECK(v != orig);  // astronomically unlikely to be identity
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == orig);
}

TEST_CASE("same seed same stream, different seed different stream") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
        all_equal = all_equal && x == y;
        any_diff = any_diff || x != z;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}
