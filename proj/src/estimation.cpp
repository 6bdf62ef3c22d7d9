#include "catforge/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "catforge/irt.hpp"
#include "catforge/rng.hpp"

namespace catforge {

namespace {

constexpr double kHillClimbInitialStep = 1.0;
constexpr double kHillClimbMinStep = 1e-5;
constexpr std::size_t kDePopulation = 20;
constexpr double kDeWeight = 0.8;
constexpr double kDeCrossover = 0.9;  // vacuous in one dimension (see below)
constexpr double kDeSpreadTolerance = 1e-8;
constexpr std::size_t kDeMaxGenerations = 200;

/// Gathers the administered items once; the log-likelihood is evaluated
/// many times per call against this snapshot.
std::vector<Item> administered_items(const EstimationContext& ctx) {
    std::vector<Item> items;
    items.reserve(ctx.administered.size());
    for (std::size_t index : ctx.administered) items.push_back(ctx.bank->item(index));
    return items;
}

bool constant_responses(const std::vector<bool>& responses) {
    return std::all_of(responses.begin(), responses.end(), [](bool x) { return x; }) ||
           std::all_of(responses.begin(), responses.end(), [](bool x) { return !x; });
}

/// Dodd's update for constant response vectors: halve the gap toward the
/// bank's extreme difficulty.
OptimizerReport dodd_update(const EstimationContext& ctx, bool all_correct) {
    const auto [lo, hi] = ctx.effective_bounds();
    const Theta current = ctx.est_theta.value_or(0.5 * (lo + hi));
    Theta next;
    if (all_correct) {
        next = current + (ctx.bank->max_b() - current) / 2.0;
    } else {
        next = current - (current - ctx.bank->min_b()) / 2.0;
    }
    return {std::clamp(next, lo, hi), 0, true};
}

}  // namespace

void EstimationContext::check() const {
    if (bank == nullptr) throw DomainError("estimation context has no bank");
    if (administered.empty()) {
        throw DomainError("estimation context has no administered items");
    }
    if (responses == nullptr || responses->size() != administered.size()) {
        throw ShapeError("estimation context responses must align with administered items");
    }
    std::vector<char> seen(bank->size(), 0);
    for (std::size_t index : administered) {
        if (index >= bank->size()) {
            throw DomainError("administered index " + std::to_string(index) +
                              " out of range");
        }
        if (seen[index]) {
            throw DomainError("administered index " + std::to_string(index) + " repeats");
        }
        seen[index] = 1;
    }
    if (est_theta && !std::isfinite(*est_theta)) {
        throw DomainError("warm start estimate must be finite");
    }
    if (bounds && !(bounds->first < bounds->second)) {
        throw DomainError("estimation bounds must satisfy lo < hi");
    }
}

std::pair<double, double> EstimationContext::effective_bounds() const {
    if (bounds) return *bounds;
    return {bank->min_b() - 1.0, bank->max_b() + 1.0};
}

OptimizerReport HillClimbingEstimator::estimate(const EstimationContext& ctx) const {
    ctx.check();
    if (constant_responses(*ctx.responses)) {
        return dodd_update(ctx, ctx.responses->front());
    }

    const auto items = administered_items(ctx);
    const auto [lo, hi] = ctx.effective_bounds();
    std::size_t evaluations = 0;
    auto objective = [&](double theta) {
        ++evaluations;
        return irt::log_likelihood(theta, *ctx.responses, items);
    };

    double theta = std::clamp(ctx.est_theta.value_or(0.5 * (lo + hi)), lo, hi);
    double value = objective(theta);
    double step = kHillClimbInitialStep;
    while (step >= kHillClimbMinStep) {
        bool improved = false;
        for (const double candidate :
             {std::min(theta + step, hi), std::max(theta - step, lo)}) {
            if (candidate == theta) continue;
            const double candidate_value = objective(candidate);
            if (candidate_value > value) {
                theta = candidate;
                value = candidate_value;
                improved = true;
                break;
            }
        }
        if (!improved) step /= 2.0;
    }
    return {theta, evaluations, true};
}

OptimizerReport DifferentialEvolutionEstimator::estimate(
    const EstimationContext& ctx) const {
    ctx.check();
    const auto items = administered_items(ctx);
    const auto [lo, hi] = ctx.effective_bounds();
    std::size_t evaluations = 0;
    auto objective = [&](double theta) {
        ++evaluations;
        return irt::log_likelihood(theta, *ctx.responses, items);
    };

    Rng rng(ctx.rng_seed);
    std::array<double, kDePopulation> population;
    std::array<double, kDePopulation> fitness;
    for (std::size_t i = 0; i < kDePopulation; ++i) {
        population[i] = rng.uniform(lo, hi);
    }
    if (ctx.est_theta) {
        // Seeding the warm start guarantees the result never scores below it.
        population[0] = std::clamp(*ctx.est_theta, lo, hi);
    }
    for (std::size_t i = 0; i < kDePopulation; ++i) {
        fitness[i] = objective(population[i]);
    }

    bool converged = false;
    for (std::size_t gen = 0; gen < kDeMaxGenerations; ++gen) {
        const auto [min_it, max_it] =
            std::minmax_element(population.begin(), population.end());
        if (*max_it - *min_it < kDeSpreadTolerance) {
            converged = true;
            break;
        }
        for (std::size_t i = 0; i < kDePopulation; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = rng.uniform_index(kDePopulation); } while (r1 == i);
            do { r2 = rng.uniform_index(kDePopulation); } while (r2 == i || r2 == r1);
            do {
                r3 = rng.uniform_index(kDePopulation);
            } while (r3 == i || r3 == r1 || r3 == r2);
            // rand/1 mutation. In one dimension the forced crossover index
            // always hits the single coordinate, so CR never rejects it.
            (void)kDeCrossover;
            const double trial = std::clamp(
                population[r1] + kDeWeight * (population[r2] - population[r3]), lo, hi);
            const double trial_fitness = objective(trial);
            if (trial_fitness >= fitness[i]) {
                population[i] = trial;
                fitness[i] = trial_fitness;
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < kDePopulation; ++i) {
        if (fitness[i] > fitness[best]) best = i;
    }
    return {population[best], evaluations, converged};
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
    if (name == "hill_climbing") return EstimatorKind::HillClimbing;
    if (name == "differential_evolution") return EstimatorKind::DifferentialEvolution;
    throw DomainError("unknown estimator kind '" + std::string(name) + "'");
}

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::HillClimbing: return "hill_climbing";
        case EstimatorKind::DifferentialEvolution: return "differential_evolution";
    }
    throw DomainError("invalid EstimatorKind enum value");
}

void EstimatorConfig::check() const {
    if (bounds && !(bounds->first < bounds->second)) {
        throw DomainError("estimator bounds must satisfy lo < hi");
    }
}

std::unique_ptr<Estimator> make_estimator(const EstimatorConfig& config) {
    config.check();
    switch (config.kind) {
        case EstimatorKind::HillClimbing:
            return std::make_unique<HillClimbingEstimator>();
        case EstimatorKind::DifferentialEvolution:
            return std::make_unique<DifferentialEvolutionEstimator>();
    }
    throw DomainError("invalid EstimatorKind enum value");
}

}  // namespace catforge
