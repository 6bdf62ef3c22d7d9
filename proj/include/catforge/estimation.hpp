#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "catforge/item_bank.hpp"

namespace catforge {

struct EstimationContext {
    const ItemBank* bank = nullptr;
    std::span<const std::size_t> administered;   // unique, in range, nonempty
    const std::vector<bool>* responses = nullptr;  // aligned with administered
    std::optional<Theta> est_theta;                // warm start
    /// Search interval; defaults to [min(b) - 1, max(b) + 1] over the bank.
    std::optional<std::pair<double, double>> bounds;
    std::uint64_t rng_seed = 0;  // differential evolution only

    void check() const;
    std::pair<double, double> effective_bounds() const;
};

struct OptimizerReport {
    Theta theta_hat = 0.0;
    std::size_t evaluations = 0;  // exact count of log-likelihood calls
    bool converged = false;
};

class Estimator {
public:
    virtual ~Estimator() = default;
    virtual OptimizerReport estimate(const EstimationContext& ctx) const = 0;
    virtual std::string_view name() const noexcept = 0;
};

/// Bounded hill-climbing maximum-likelihood estimation. Starts at the warm
/// start (or the bounds midpoint), steps by 1.0 toward increasing
/// likelihood, halves the step when neither direction improves, and stops
/// once the step drops below 1e-5.
///
/// Constant response vectors leave the likelihood without an interior
/// maximum, so they bypass optimization entirely: the estimate moves half
/// the gap toward the bank's hardest difficulty after an all-correct
/// vector, or toward the easiest after an all-wrong one, with zero
/// likelihood evaluations.
class HillClimbingEstimator final : public Estimator {
public:
    OptimizerReport estimate(const EstimationContext& ctx) const override;
    std::string_view name() const noexcept override { return "hill_climbing"; }
};

/// Differential evolution (rand/1/bin) over the bounded interval:
/// population 20, weight F = 0.8, crossover CR = 0.9, stopping when the
/// population spread falls below 1e-8 or after 200 generations. Seeded and
/// deterministic. The warm start, when given, joins the initial population
/// so the returned estimate never scores worse than it.
class DifferentialEvolutionEstimator final : public Estimator {
public:
    OptimizerReport estimate(const EstimationContext& ctx) const override;
    std::string_view name() const noexcept override { return "differential_evolution"; }
};

enum class EstimatorKind { HillClimbing, DifferentialEvolution };

EstimatorKind estimator_kind_from_string(std::string_view name);
std::string_view to_string(EstimatorKind kind);

struct EstimatorConfig {
    EstimatorKind kind = EstimatorKind::HillClimbing;
    /// Run-level bounds override applied to every estimation call.
    std::optional<std::pair<double, double>> bounds;

    void check() const;
};

std::unique_ptr<Estimator> make_estimator(const EstimatorConfig& config);

}  // namespace catforge
