#include "catforge/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "catforge/irt.hpp"

namespace catforge {

namespace {

ExamineeState run_examinee(Theta true_theta, const SimulationConfig& config,
                           const Selector& selector, const Estimator& estimator,
                           Rng& rng) {
    ExamineeState state;
    state.true_theta = true_theta;
    state.estimates.push_back(initialize(config.initializer, rng));

    // Stratified selectors take K from a fixed-length stopper when the
    // config does not pin a stratum count.
    const std::size_t test_length =
        config.stopper.kind == StopperConfig::Kind::MaxItem ? config.stopper.max_items
                                                            : 0;

    std::vector<Item> taken;  // administered items, presentation order
    while (true) {
        const Theta est = state.estimates.back();
        if (should_stop(config.stopper, taken, est)) break;
        if (state.administered.size() == config.bank.size()) {
            state.exhausted = true;  // bank ran out before the stopper fired
            break;
        }

        SelectionContext sctx;
        sctx.bank = &config.bank;
        sctx.administered = state.administered;
        sctx.est_theta = est;
        sctx.rng_seed = rng.next_u64();
        sctx.test_length = test_length;
        std::size_t index;
        try {
            index = selector.select(sctx);
        } catch (const ExhaustionError&) {
            state.exhausted = true;
            break;
        }

        const Item& item = config.bank.item(index);
        const bool response = simulate_response(true_theta, item, rng);
        state.administered.push_back(index);
        state.responses.push_back(response);
        taken.push_back(item);

        EstimationContext ectx;
        ectx.bank = &config.bank;
        ectx.administered = state.administered;
        ectx.responses = &state.responses;
        ectx.est_theta = est;
        ectx.bounds = config.estimator.bounds;
        ectx.rng_seed = rng.next_u64();
        const Theta next = estimator.estimate(ectx).theta_hat;
        state.estimates.push_back(next);

        const double info = irt::test_info(next, taken);
        const double see = info > 0.0 ? std::sqrt(1.0 / info)
                                      : std::numeric_limits<double>::infinity();
        state.info_trace.push_back(info);
        state.see_trace.push_back(see);
        state.var_trace.push_back(see * see);
    }
    return state;
}

}  // namespace

void SimulationConfig::check() const {
    if (bank.empty()) throw DomainError("simulation requires a nonempty bank");
    if (ValidationReport report = bank.validate(); !report.ok()) {
        throw ValidationError("simulation bank is invalid:\n" + report.to_string());
    }
    if (const auto* count = std::get_if<std::size_t>(&examinees)) {
        if (*count < 1) throw DomainError("examinee count must be >= 1");
    } else {
        const auto& thetas = std::get<std::vector<Theta>>(examinees);
        if (thetas.empty()) throw DomainError("examinee proficiency list is empty");
        for (Theta t : thetas) {
            if (!std::isfinite(t)) {
                throw DomainError("examinee proficiencies must be finite");
            }
        }
    }
    initializer.check();
    selector.check();
    estimator.check();
    stopper.check();

    const bool stratified = selector.kind == SelectorKind::AStratified ||
                            selector.kind == SelectorKind::AStratifiedBBlocking ||
                            selector.kind == SelectorKind::MaxInfoStratified ||
                            selector.kind == SelectorKind::MaxInfoBBlocking;
    if (stratified && selector.strata == 0 &&
        stopper.kind != StopperConfig::Kind::MaxItem) {
        throw DomainError(
            "stratified selectors need a stratum count: set selector strata or "
            "use a fixed-length stopper");
    }
    if (selector.kind == SelectorKind::Linear) {
        for (std::size_t index : selector.indexes) {
            if (index >= bank.size()) {
                throw DomainError("linear selector index " + std::to_string(index) +
                                  " out of range for bank of size " +
                                  std::to_string(bank.size()));
            }
        }
    }
}

std::vector<Theta> generate_examinees(std::size_t count, const ItemBank* bank,
                                      std::uint64_t seed) {
    if (count < 1) throw DomainError("examinee count must be >= 1");
    double mean = 0.0;
    double sd = 1.0;
    if (bank != nullptr && !bank->empty()) {
        mean = bank->mean_b();
        sd = bank->sd_b();
    }
    Rng rng(seed);
    std::vector<Theta> thetas(count);
    for (Theta& theta : thetas) theta = rng.normal(mean, sd);
    return thetas;
}

bool simulate_response(Theta true_theta, const Item& item, Rng& rng) {
    return rng.bernoulli(irt::icc(true_theta, item));
}

ValidityMeasures validity_measures(std::span<const ExamineeState> states,
                                   const ItemBank& bank) {
    if (states.empty()) throw DomainError("validity measures require >= 1 examinee");
    const double j = static_cast<double>(states.size());

    ValidityMeasures out;
    double total_length = 0.0;
    for (const ExamineeState& state : states) {
        const Theta final_est =
            state.estimates.empty() ? 0.0 : state.estimates.back();
        const double err = final_est - state.true_theta;
        out.bias += err;
        out.mse += err * err;
        total_length += static_cast<double>(state.administered.size());
    }
    out.bias /= j;
    out.mse /= j;
    out.rmse = std::sqrt(out.mse);

    const double n = static_cast<double>(bank.size());
    const double q = total_length / j;  // mean test length
    if (q > 0.0 && n > 0.0) {
        double mean_r = 0.0;
        for (const Item& item : bank.items()) mean_r += item.r;
        mean_r /= n;
        double var_r = 0.0;
        for (const Item& item : bank.items()) {
            var_r += (item.r - mean_r) * (item.r - mean_r);
        }
        var_r /= n;  // population variance
        out.overlap = (n / q) * var_r + q / n;
    }
    return out;
}

SimulationResult simulate(const SimulationConfig& config) {
    config.check();

    std::vector<Theta> thetas;
    if (const auto* count = std::get_if<std::size_t>(&config.examinees)) {
        thetas = generate_examinees(*count, &config.bank,
                                    derive_seed(config.seed, kSeedStreamExaminees));
    } else {
        thetas = std::get<std::vector<Theta>>(config.examinees);
    }

    const auto selector = make_selector(config.selector);
    const auto estimator = make_estimator(config.estimator);

    SimulationResult result;
    result.states.resize(thetas.size());

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            Rng rng(derive_seed(config.seed, kSeedStreamFirstTest + j));
            result.states[j] =
                run_examinee(thetas[j], config, *selector, *estimator, rng);
        }
    };

    const std::size_t count = thetas.size();
    const unsigned threads =
        std::max(1u, std::min<unsigned>(config.threads,
                                        static_cast<unsigned>(count)));
    if (threads == 1) {
        worker(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const std::size_t chunk = (count + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }

    std::vector<std::vector<std::size_t>> administered;
    administered.reserve(result.states.size());
    for (const ExamineeState& state : result.states) {
        administered.push_back(state.administered);
    }
    result.bank = config.bank.update_exposure(administered);
    result.validity = validity_measures(result.states, result.bank);
    return result;
}

}  // namespace catforge
