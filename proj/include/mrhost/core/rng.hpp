#pragma once

#include <cstdint>
#include <random>

namespace mrhost {

// Deterministic random source. std::mt19937_64's output sequence is fixed by
// the standard, but the std:: distributions are not, so the draws below are
// computed by hand to keep simulator streams identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent child seed for stream `index` (splitmix64 of seed ^ index).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

    std::uint64_t next_u64() { return engine_(); }
    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal scaled by sd, Box-Muller.
    double gaussian(double mean, double sd);
    // Exponential inter-arrival with the given rate (events per unit).
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

}  // namespace mrhost
