#pragma once

#include <cstdint>

namespace tma {

// SplitMix64. All randomness in the project goes through this so that
// results are bit-identical across platforms; std:: distributions are
// implementation-defined and must not be used.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Sequential stream for generation tasks (scenario sampling).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xA5A5A5A5DEADBEEFULL)) {}

    std::uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// Stateless draw keyed by (seed, a, b, purpose). Used by the simulator so
// that a disturbance draw depends only on (seed, clock, flight, purpose),
// never on evaluation order.
inline double keyed_unit_double(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                std::uint64_t purpose) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (a * 0x9E3779B97F4A7C15ULL));
    h = splitmix64(h ^ (b * 0xC2B2AE3D27D4EB4FULL));
    h = splitmix64(h ^ (purpose * 0x165667B19E3779F9ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace tma
