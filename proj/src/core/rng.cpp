#include "mrhost/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace mrhost {

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master ^ (index * 0x9E3779B97F4A7C15ULL) ^ 0xD1B54A32D192ED03ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::gaussian(double mean, double sd) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + sd * z;
}

double Rng::exponential(double rate) {
    return -std::log(1.0 - uniform()) / rate;
}

}  // namespace mrhost
