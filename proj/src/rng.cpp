#include "catforge/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "catforge/errors.hpp"

namespace catforge {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix64(master + (stream + 1) * kGolden);
}

Rng::Rng(std::uint64_t seed) noexcept {
    // splitmix64 expansion; never produces the all-zero state.
    std::uint64_t x = seed;
    for (auto& word : s_) {
        x += kGolden;
        word = mix64(x);
    }
}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept {
    return lo + uniform() * (hi - lo);
}

double Rng::normal() noexcept {
    // Box-Muller without a cached spare so every call consumes exactly two
    // uniforms; keeps stream accounting simple and reproducible.
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal(double mean, double sd) noexcept {
    return mean + sd * normal();
}

bool Rng::bernoulli(double p) noexcept {
    return uniform() < p;
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw DomainError("uniform_index requires n > 0");
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw = next_u64();
    while (draw >= limit) draw = next_u64();
    return static_cast<std::size_t>(draw % span);
}

}  // namespace catforge
