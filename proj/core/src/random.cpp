#include "tscsim/random.hpp"

#include <cmath>
#include <limits>

namespace tscsim {

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) {
        return lo;
    }
    const auto range = static_cast<std::uint64_t>(hi - lo);
    if (range == std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::int64_t>(engine_());
    }
    const std::uint64_t span = range + 1;
    // Largest multiple of span that fits; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw = engine_();
    while (draw >= limit) {
        draw = engine_();
    }
    return lo + static_cast<std::int64_t>(draw % span);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t resample) {
    const std::uint64_t h0 = mix64(master);
    const std::uint64_t h1 = mix64(h0 ^ ((tag + 1) * 0x9E3779B97F4A7C15ULL));
    return mix64(h1 ^ ((resample + 1) * 0xC2B2AE3D27D4EB4FULL));
}

} // namespace tscsim
