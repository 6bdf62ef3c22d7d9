#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "catforge/estimation.hpp"
#include "catforge/initialization.hpp"
#include "catforge/item_bank.hpp"
#include "catforge/selection.hpp"
#include "catforge/stopping.hpp"

namespace catforge {

/// Full trajectory of one examinee's test. At every step t the traces hold
/// SEE, variance and test information evaluated at the freshly estimated
/// theta_hat_t over the items administered so far, so
/// |administered| = |responses| = |estimates| - 1 = |see_trace| = ...
struct ExamineeState {
    Theta true_theta = 0.0;
    std::vector<Theta> estimates;  // theta_hat_0 .. theta_hat_T
    std::vector<std::size_t> administered;
    std::vector<bool> responses;
    std::vector<double> see_trace;
    std::vector<double> var_trace;
    std::vector<double> info_trace;
    /// Set when the selector ran out of items before the stopper fired;
    /// the test ends early but stays in the result.
    bool exhausted = false;
};

struct ValidityMeasures {
    double bias = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double overlap = 0.0;
};

struct SimulationResult {
    std::vector<ExamineeState> states;
    ItemBank bank;  // exposure rates updated once over all tests
    ValidityMeasures validity;
};

/// Either a number of examinees to draw or their explicit proficiencies.
using ExamineeSpec = std::variant<std::size_t, std::vector<Theta>>;

struct SimulationConfig {
    ItemBank bank;
    ExamineeSpec examinees = std::size_t{1};
    InitializerConfig initializer;
    SelectorConfig selector;
    EstimatorConfig estimator;
    StopperConfig stopper;
    std::uint64_t seed = 0;
    /// Worker threads; any value yields results identical to threads = 1.
    unsigned threads = 1;

    void check() const;
};

/// Draws examinee proficiencies from N(mean(b), sd(b)) over the bank's
/// difficulties, or from N(0, 1) when no bank is given.
std::vector<Theta> generate_examinees(std::size_t count, const ItemBank* bank,
                                      std::uint64_t seed);

/// Bernoulli response: correct with probability icc(true_theta, item).
bool simulate_response(Theta true_theta, const Item& item, Rng& rng);

/// Bias, MSE and RMSE of the final estimates against the true
/// proficiencies, plus the test overlap rate
///   T = (N/Q) S_r^2 + Q/N
/// with N the bank size, S_r^2 the population variance of the exposure
/// rates and Q the mean test length (the only consistent scalar when test
/// lengths vary).
ValidityMeasures validity_measures(std::span<const ExamineeState> states,
                                   const ItemBank& bank);

/// Runs the four-phase CAT loop (initialize, then select/respond/estimate
/// until the stopper fires) for every examinee. Fully deterministic per
/// master seed: each examinee consumes an independent derived stream, so
/// parallel and sequential execution produce identical results.
SimulationResult simulate(const SimulationConfig& config);

}  // namespace catforge
