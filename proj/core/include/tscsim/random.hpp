#pragma once

#include <cstdint>
#include <random>

namespace tscsim {

/// Seeded generator with platform-independent draws.
///
/// The std:: distributions are implementation-defined, so identical seeds can
/// give different data across standard libraries. All draws here are built
/// directly on the 64-bit Mersenne Twister, whose output sequence is fixed by
/// the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on the closed range [lo, hi]. Unbiased (rejection).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Standard normal draw (Marsaglia polar method).
    double normal();

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for one (simulator, resample) cell, derived from the master seed.
///
///   h0 = mix64(master)
///   h1 = mix64(h0 ^ (tag + 1) * 0x9E3779B97F4A7C15)
///   seed = mix64(h1 ^ (resample + 1) * 0xC2B2AE3D27D4EB4F)
///
/// This derivation is part of the file format: changing it changes every
/// dataset generated from a stored master seed.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t resample);

} // namespace tscsim
