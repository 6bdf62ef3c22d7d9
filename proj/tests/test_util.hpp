#pragma once

#include <vector>

#include "catforge/irt.hpp"
#include "catforge/item.hpp"
#include "catforge/item_bank.hpp"
#include "catforge/rng.hpp"

namespace catforge::testutil {

/// Random valid 4PL item with parameters spread wider than the generator's
/// defaults, to exercise the math away from the typical region.
inline Item random_item(Rng& rng) {
    Item item;
    item.a = rng.uniform(0.3, 2.8);
    item.b = rng.uniform(-3.0, 3.0);
    item.c = rng.uniform(0.0, 0.4);
    item.d = rng.uniform(item.c + 0.3, 1.0);
    return item;
}

inline Item random_2pl(Rng& rng) {
    Item item;
    item.a = rng.uniform(0.4, 2.5);
    item.b = rng.uniform(-3.0, 3.0);
    return item;
}

inline std::vector<Item> random_items(Rng& rng, std::size_t count) {
    std::vector<Item> items;
    items.reserve(count);
    for (std::size_t i = 0; i < count; ++i) items.push_back(random_item(rng));
    return items;
}

/// Independent argmax oracle: exhaustive scan of the information over a
/// theta grid. Deliberately brute force.
inline double grid_argmax_info(const Item& item, double lo = -6.0, double hi = 6.0,
                               double step = 1e-4) {
    double best_theta = lo;
    double best_info = -1.0;
    for (double t = lo; t <= hi; t += step) {
        const double info = irt::inf(t, item);
        if (info > best_info) {
            best_info = info;
            best_theta = t;
        }
    }
    return best_theta;
}

/// Independent argmax oracle for the log-likelihood.
inline double grid_argmax_loglik(const std::vector<bool>& responses,
                                 const std::vector<Item>& items, double lo = -6.0,
                                 double hi = 6.0, double step = 1e-4) {
    double best_theta = lo;
    double best = -1e300;
    for (double t = lo; t <= hi; t += step) {
        const double value = irt::log_likelihood(t, responses, items);
        if (value > best) {
            best = value;
            best_theta = t;
        }
    }
    return best_theta;
}

}  // namespace catforge::testutil
