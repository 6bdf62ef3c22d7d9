#pragma once

#include <span>
#include <vector>

#include "catforge/item.hpp"

namespace catforge::irt {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] inside log
/// terms so the log-likelihood stays finite at extreme proficiencies.
inline constexpr double kProbClamp = 1e-10;

/// Item characteristic curve: probability of a correct answer,
///   P(theta) = c + (d - c) / (1 + exp(-a (theta - b))).
/// Strictly increasing in theta, bounded by (c, d).
double icc(Theta theta, const Item& item);

/// Item information,
///   I(theta) = a^2 (P-c)^2 (d-P)^2 / ((d-c)^2 (1-P) P).
/// Nonnegative; evaluates the limit 0 when P reaches 0 or 1.
double inf(Theta theta, const Item& item);

/// Proficiency at which the item's information is maximal:
///   b + (1/a) log((x* - c) / (d - x*)),
/// where x* is the interior root of the stationarity cubic
///   2x^3 - 3x^2 + (c + d - 2cd) x + cd = 0,
/// obtained in closed form via the trigonometric method. With c = 0, d = 1
/// this reduces to x* = 1/2 and the maximum sits at b.
Theta max_info(const Item& item);

/// Test information: sum of item information over `items`. Errors on empty.
double test_info(Theta theta, std::span<const Item> items);

/// Standard error of estimation, sqrt(1 / test_info). +infinity when the
/// test information is zero.
double see(Theta theta, std::span<const Item> items);

/// Estimation variance, SEE^2 (computed exactly as the square of see()).
double variance(Theta theta, std::span<const Item> items);

/// Test reliability, 1 - 1 / test_info. Negative when test_info < 1;
/// -infinity when test_info is zero.
double reliability(Theta theta, std::span<const Item> items);

/// Dichotomous log-likelihood,
///   sum_i [ x_i log P_i + (1 - x_i) log(1 - P_i) ],
/// with probabilities clamped per kProbClamp. Always finite, always <= 0.
double log_likelihood(Theta theta, const std::vector<bool>& responses,
                      std::span<const Item> items);

/// Batch forms. Element i equals the scalar operation applied to item i.
std::vector<double> icc_batch(Theta theta, std::span<const Item> items);
std::vector<double> inf_batch(Theta theta, std::span<const Item> items);
std::vector<Theta> max_info_batch(std::span<const Item> items);

}  // namespace catforge::irt
