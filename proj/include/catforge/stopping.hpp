#pragma once

#include <cstddef>
#include <span>

#include "catforge/item.hpp"

namespace catforge {

/// Stopping criteria. MaxItem ends the test at a fixed length; MinError
/// ends it once the standard error of estimation drops below a threshold.
/// min_items_guard keeps MinError from ending a test before any item was
/// administered (an empty test has infinite SEE anyway, but the guard also
/// covers pathological near-zero thresholds).
struct StopperConfig {
    enum class Kind { MaxItem, MinError };

    Kind kind = Kind::MaxItem;
    std::size_t max_items = 20;       // MaxItem
    double see_threshold = 0.3;       // MinError
    std::size_t min_items_guard = 1;  // MinError

    void check() const;
};

/// True when the test should end given the items administered so far and
/// the current estimate. An infinite SEE never stops a MinError test.
bool should_stop(const StopperConfig& config, std::span<const Item> administered_items,
                 Theta est_theta);

}  // namespace catforge
