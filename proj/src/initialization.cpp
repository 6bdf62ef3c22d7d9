#include "catforge/initialization.hpp"

#include <cmath>

namespace catforge {

void InitializerConfig::check() const {
    if (kind == Kind::Fixed) {
        if (!std::isfinite(fixed_value)) {
            throw DomainError("fixed initializer value must be finite");
        }
        return;
    }
    if (const auto* u = std::get_if<UniformDist>(&distribution)) {
        if (!(u->lo < u->hi) || !std::isfinite(u->lo) || !std::isfinite(u->hi)) {
            throw DomainError("uniform initializer requires finite lo < hi");
        }
    } else if (const auto* n = std::get_if<NormalDist>(&distribution)) {
        if (!(n->sd > 0.0) || !std::isfinite(n->mean) || !std::isfinite(n->sd)) {
            throw DomainError("normal initializer requires finite mean and sd > 0");
        }
    }
}

Theta initialize(const InitializerConfig& config, Rng& rng) {
    config.check();
    if (config.kind == InitializerConfig::Kind::Fixed) {
        return config.fixed_value;
    }
    if (const auto* u = std::get_if<UniformDist>(&config.distribution)) {
        return rng.uniform(u->lo, u->hi);
    }
    const auto& n = std::get<NormalDist>(config.distribution);
    return rng.normal(n.mean, n.sd);
}

Theta initialize(const InitializerConfig& config) {
    Rng rng(config.seed);
    return initialize(config, rng);
}

}  // namespace catforge
