#include "catforge/stopping.hpp"

#include <cmath>

#include "catforge/irt.hpp"

namespace catforge {

void StopperConfig::check() const {
    if (kind == Kind::MaxItem) {
        if (max_items < 1) throw DomainError("max_items must be >= 1");
        return;
    }
    if (!(see_threshold > 0.0) || !std::isfinite(see_threshold)) {
        throw DomainError("see_threshold must be finite and > 0");
    }
}

bool should_stop(const StopperConfig& config, std::span<const Item> administered_items,
                 Theta est_theta) {
    config.check();
    if (config.kind == StopperConfig::Kind::MaxItem) {
        return administered_items.size() >= config.max_items;
    }
    if (administered_items.empty() ||
        administered_items.size() < config.min_items_guard) {
        return false;
    }
    return irt::see(est_theta, administered_items) < config.see_threshold;
}

}  // namespace catforge
