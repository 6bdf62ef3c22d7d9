#pragma once

#include <cstddef>
#include <cstdint>

namespace catforge {

/// splitmix64 finalizer. Used for seed expansion and stream derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Fixed seed-splitting rule: the stream seed is
/// mix64(master + (stream + 1) * 0x9E3779B97F4A7C15). The simulator derives
/// stream 0 for bank generation, stream 1 for examinee proficiencies and
/// stream 2 + j for examinee j, which makes results independent of the
/// order examinees are processed in.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

inline constexpr std::uint64_t kSeedStreamBank = 0;
inline constexpr std::uint64_t kSeedStreamExaminees = 1;
inline constexpr std::uint64_t kSeedStreamFirstTest = 2;

/// xoshiro256** seeded through splitmix64. Hand-rolled so identical seeds
/// produce identical draws on every platform and standard library; the
/// standard <random> distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() noexcept;
    double normal(double mean, double sd) noexcept;
    /// True with probability p.
    bool bernoulli(double p) noexcept;
    /// Unbiased integer in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n);

private:
    std::uint64_t s_[4];
};

}  // namespace catforge
