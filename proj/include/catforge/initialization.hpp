#pragma once

#include <cstdint>
#include <variant>

#include "catforge/item.hpp"
#include "catforge/rng.hpp"

namespace catforge {

struct UniformDist {
    double lo = -4.0;
    double hi = 4.0;
};

struct NormalDist {
    double mean = 0.0;
    double sd = 1.0;
};

using ThetaDist = std::variant<UniformDist, NormalDist>;

/// Produces the starting proficiency estimate for a test. Fixed returns a
/// constant; Random draws from the configured distribution (default
/// Uniform(-4, 4), covering the range proficiencies commonly lie in).
struct InitializerConfig {
    enum class Kind { Fixed, Random };

    Kind kind = Kind::Random;
    double fixed_value = 0.0;   // Fixed only
    ThetaDist distribution = UniformDist{};  // Random only
    std::uint64_t seed = 0;

    void check() const;
};

/// Draw one starting estimate with a caller-provided generator. Fixed
/// ignores the generator entirely (no draws are consumed).
Theta initialize(const InitializerConfig& config, Rng& rng);

/// Convenience form seeding a fresh generator from config.seed.
Theta initialize(const InitializerConfig& config);

}  // namespace catforge
