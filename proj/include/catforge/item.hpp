#pragma once

#include <cmath>
#include <string_view>

#include "catforge/errors.hpp"

namespace catforge {

/// Proficiency on the latent scale. Estimates live on the same scale.
using Theta = double;

/// Working bounds for grids, oracles and optimizers. Proficiencies are
/// commonly within [-4, 4]; a margin is added on both sides.
inline constexpr double kThetaLo = -6.0;
inline constexpr double kThetaHi = 6.0;

/// Logistic model family. Each model extends the previous one:
/// 1PL fixes a = 1, 2PL adds discrimination, 3PL adds pseudo-guessing,
/// 4PL adds the upper asymptote.
enum class Model { OnePL, TwoPL, ThreePL, FourPL };

Model model_from_string(std::string_view name);  // "1PL" .. "4PL"
std::string_view to_string(Model model);

/// Number of free parameter columns for a model (1PL -> 1, ..., 4PL -> 4).
std::size_t parameter_count(Model model);

/// One test item under the logistic models.
///
/// a: discrimination (> 0), b: difficulty (theta scale), c: pseudo-guessing
/// probability, d: upper asymptote, r: exposure rate. Setting d = 1 reduces
/// the item to 3PL, additionally c = 0 to 2PL, additionally a = 1 to
/// 1PL/Rasch.
struct Item {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;
    double r = 0.0;

    bool valid() const noexcept {
        return std::isfinite(a) && a > 0.0 && std::isfinite(b) && c >= 0.0 &&
               c < d && d <= 1.0 && r >= 0.0 && r <= 1.0;
    }

    /// Throws DomainError if any parameter is out of domain.
    void check() const;

    bool operator==(const Item&) const = default;
};

}  // namespace catforge
