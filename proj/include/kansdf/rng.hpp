#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace kansdf {

uint64_t splitmix64(uint64_t& state);

// FNV-1a over bytes; used for stream derivation and content hashes.
uint64_t fnv1a64(const void* bytes, size_t n, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ull);

// xoshiro256** with splitmix64 seeding.  All distributions below are built
// from raw 64-bit draws with explicit arithmetic so the stream is identical
// on every platform (std::normal_distribution is not).
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; consumes two draws per call, keeps no
    // cached second value so the state stays 4 words.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Unbiased integer in [0, n) via 128-bit multiply rejection.
    uint64_t next_below(uint64_t n);

    std::array<uint64_t, 4> state() const { return s_; }
    void set_state(const std::array<uint64_t, 4>& s) { s_ = s; }

private:
    std::array<uint64_t, 4> s_{};
};

// Independent child stream for a named purpose under a run seed.
Rng derive_rng(uint64_t seed, std::string_view tag);
Rng derive_rng(uint64_t seed, std::string_view tag, uint64_t index);

}  // namespace kansdf
