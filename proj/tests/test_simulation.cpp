#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "catforge/irt.hpp"
#include "catforge/simulation.hpp"
#include "test_util.hpp"

using namespace catforge;
using namespace catforge::testutil;
using doctest::Approx;

namespace {

SimulationConfig base_config(ItemBank bank, std::size_t examinees) {
    SimulationConfig config;
    config.bank = std::move(bank);
    config.examinees = examinees;
    config.initializer.kind = InitializerConfig::Kind::Random;
    config.selector.kind = SelectorKind::MaxInfo;
    config.estimator.kind = EstimatorKind::HillClimbing;
    config.stopper.kind = StopperConfig::Kind::MaxItem;
    config.stopper.max_items = 20;
    config.seed = 31415;
    return config;
}

bool states_identical(const ExamineeState& lhs, const ExamineeState& rhs) {
    return lhs.true_theta == rhs.true_theta && lhs.estimates == rhs.estimates &&
           lhs.administered == rhs.administered && lhs.responses == rhs.responses &&
           lhs.see_trace == rhs.see_trace && lhs.var_trace == rhs.var_trace &&
           lhs.info_trace == rhs.info_trace && lhs.exhausted == rhs.exhausted;
}

}  // namespace

TEST_CASE("examinee generation follows the bank's difficulty distribution") {
    // Degenerate bank: every difficulty 0.5, sd 0.
    const ItemBank flat(std::vector<Item>(10, Item{1.0, 0.5, 0.0, 1.0}), Model::TwoPL);
    const auto thetas = generate_examinees(50, &flat, 7);
    for (Theta theta : thetas) CHECK(theta == 0.5);

    // Without a bank: standard normal.
    const auto standard = generate_examinees(100000, nullptr, 8);
    double mean = 0.0;
    for (Theta theta : standard) mean += theta;
    mean /= static_cast<double>(standard.size());
    CHECK(mean >= -0.02);
    CHECK(mean <= 0.02);

    CHECK(generate_examinees(20, nullptr, 9) == generate_examinees(20, nullptr, 9));
    CHECK_THROWS_AS(generate_examinees(0, nullptr, 1), DomainError);
}

TEST_CASE("response simulation is a seeded bernoulli of the characteristic curve") {
    Rng rng(10);
    // Near-certain success.
    const Item easy{1.0, 0.0, 0.9999, 1.0};
    int correct = 0;
    for (int i = 0; i < 1000; ++i) correct += simulate_response(0.0, easy, rng) ? 1 : 0;
    CHECK(correct >= 998);

    // At theta = b with no guessing the probability is one half.
    const Item mid{1.0, 0.3, 0.0, 1.0};
    correct = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) correct += simulate_response(0.3, mid, rng) ? 1 : 0;
    CHECK(static_cast<double>(correct) / n == Approx(0.5).scale(1.0).epsilon(0.02));

    // Identical seeds reproduce the bit sequence.
    Rng a(77), b(77);
    for (int i = 0; i < 200; ++i) {
        CHECK(simulate_response(0.1, mid, a) == simulate_response(0.1, mid, b));
    }
}

TEST_CASE("fixed-length adaptive tests administer exactly the configured count") {
    const SimulationConfig config =
        base_config(generate_item_bank({100, Model::ThreePL, 0.0, 1}), 10);
    const SimulationResult result = simulate(config);
    REQUIRE(result.states.size() == 10);
    for (const ExamineeState& state : result.states) {
        CHECK(state.administered.size() == 20);
        CHECK(state.responses.size() == 20);
        CHECK(state.estimates.size() == 21);
        CHECK(state.see_trace.size() == 20);
        CHECK(state.var_trace.size() == 20);
        CHECK(state.info_trace.size() == 20);
        CHECK_FALSE(state.exhausted);
        const std::set<std::size_t> unique(state.administered.begin(),
                                           state.administered.end());
        CHECK(unique.size() == state.administered.size());
    }
}

TEST_CASE("minimum-error stopping yields variable test lengths") {
    SimulationConfig config =
        base_config(generate_item_bank({200, Model::TwoPL, 0.0, 2}), 12);
    config.stopper.kind = StopperConfig::Kind::MinError;
    config.stopper.see_threshold = 0.4;
    const SimulationResult result = simulate(config);
    std::set<std::size_t> lengths;
    for (const ExamineeState& state : result.states) {
        lengths.insert(state.administered.size());
        if (!state.exhausted) {
            // The final state satisfies the criterion...
            CHECK(state.see_trace.back() < 0.4);
            // ...and no earlier state did (the test stops immediately).
            for (std::size_t t = 0; t + 1 < state.see_trace.size(); ++t) {
                CHECK(state.see_trace[t] >= 0.4);
            }
        }
    }
    CHECK(lengths.size() > 1);
}

TEST_CASE("linear selection gives every examinee the same test") {
    SimulationConfig config =
        base_config(generate_item_bank({100, Model::TwoPL, 0.0, 3}), 8);
    config.selector.kind = SelectorKind::Linear;
    Rng rng(4);
    std::set<std::size_t> chosen;
    while (chosen.size() < 50) chosen.insert(rng.uniform_index(100));
    config.selector.indexes.assign(chosen.begin(), chosen.end());
    config.stopper.max_items = 50;
    const SimulationResult result = simulate(config);
    for (const ExamineeState& state : result.states) {
        CHECK(state.administered == result.states.front().administered);
        CHECK(state.administered.size() == 50);
    }
}

TEST_CASE("simulation is deterministic and thread-count independent") {
    SimulationConfig config =
        base_config(generate_item_bank({80, Model::FourPL, 0.3, 5}), 16);
    config.estimator.kind = EstimatorKind::DifferentialEvolution;

    const SimulationResult sequential = simulate(config);
    const SimulationResult repeat = simulate(config);
    SimulationConfig parallel_config = config;
    parallel_config.threads = 4;
    const SimulationResult parallel = simulate(parallel_config);

    REQUIRE(sequential.states.size() == repeat.states.size());
    REQUIRE(sequential.states.size() == parallel.states.size());
    for (std::size_t j = 0; j < sequential.states.size(); ++j) {
        CHECK(states_identical(sequential.states[j], repeat.states[j]));
        CHECK(states_identical(sequential.states[j], parallel.states[j]));
    }
    for (std::size_t i = 0; i < sequential.bank.size(); ++i) {
        CHECK(sequential.bank.item(i).r == parallel.bank.item(i).r);
    }
    CHECK(sequential.validity.rmse == parallel.validity.rmse);
    CHECK(sequential.validity.overlap == parallel.validity.overlap);
}

TEST_CASE("exposure rates reconcile with the administered tests") {
    const SimulationConfig config =
        base_config(generate_item_bank({60, Model::TwoPL, 0.0, 6}), 15);
    const SimulationResult result = simulate(config);
    CHECK(result.bank.administration_count() == 15);
    std::uint64_t total_usage = 0;
    std::size_t total_length = 0;
    for (std::size_t i = 0; i < result.bank.size(); ++i) {
        total_usage += result.bank.usage_count(i);
        CHECK(result.bank.item(i).r >= 0.0);
        CHECK(result.bank.item(i).r <= 1.0);
    }
    for (const ExamineeState& state : result.states) {
        total_length += state.administered.size();
    }
    CHECK(total_usage == total_length);
}

TEST_CASE("selector exhaustion ends the test early and is flagged") {
    SimulationConfig config = base_config(generate_item_bank({5, Model::TwoPL, 0.0, 7}), 4);
    config.stopper.max_items = 50;  // bank is smaller than the request
    const SimulationResult result = simulate(config);
    for (const ExamineeState& state : result.states) {
        CHECK(state.exhausted);
        CHECK(state.administered.size() == 5);
    }
    CHECK(std::isfinite(result.validity.rmse));
}

TEST_CASE("validity measures on hand-built states") {
    const ItemBank bank(std::vector<Item>(4, Item{1.0, 0.0, 0.0, 1.0}), Model::TwoPL);

    // Perfect recovery: everything zero except overlap.
    std::vector<ExamineeState> perfect(3);
    for (std::size_t j = 0; j < perfect.size(); ++j) {
        perfect[j].true_theta = 0.5 * static_cast<double>(j);
        perfect[j].estimates = {0.0, perfect[j].true_theta};
        perfect[j].administered = {j};
        perfect[j].responses = {true};
        perfect[j].see_trace = perfect[j].var_trace = perfect[j].info_trace = {1.0};
    }
    const ValidityMeasures exact = validity_measures(perfect, bank);
    CHECK(exact.bias == 0.0);
    CHECK(exact.mse == 0.0);
    CHECK(exact.rmse == 0.0);

    CHECK_THROWS_AS(validity_measures(std::vector<ExamineeState>{}, bank), DomainError);
}

TEST_CASE("uniform exposure hits the overlap floor Q/N") {
    // Two tests covering the bank exactly once each half: every rate 0.5,
    // zero variance, so T = Q/N.
    const ItemBank bank(std::vector<Item>(4, Item{1.0, 0.0, 0.0, 1.0}), Model::TwoPL);
    std::vector<std::vector<std::size_t>> tests = {{0, 1}, {2, 3}};
    const ItemBank exposed = bank.update_exposure(tests);

    std::vector<ExamineeState> states(2);
    states[0].administered = {0, 1};
    states[1].administered = {2, 3};
    for (auto& state : states) {
        state.estimates = {0.0, 0.0, 0.0};
        state.responses = {true, false};
        state.see_trace = state.var_trace = state.info_trace = {1.0, 1.0};
    }
    const ValidityMeasures measures = validity_measures(states, exposed);
    CHECK(measures.overlap == Approx(0.5).epsilon(1e-12));  // Q/N = 2/4
}

TEST_CASE("identical linear tests give full overlap") {
    SimulationConfig config =
        base_config(generate_item_bank({100, Model::TwoPL, 0.0, 8}), 50);
    config.selector.kind = SelectorKind::Linear;
    config.selector.indexes.resize(20);
    std::iota(config.selector.indexes.begin(), config.selector.indexes.end(), 0);
    config.stopper.max_items = 20;
    const SimulationResult result = simulate(config);
    CHECK(result.validity.overlap == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rmse squared equals mse and bias is bounded by rmse") {
    const SimulationConfig config =
        base_config(generate_item_bank({120, Model::ThreePL, 0.0, 9}), 25);
    const SimulationResult result = simulate(config);
    CHECK(result.validity.rmse * result.validity.rmse ==
          Approx(result.validity.mse).epsilon(1e-12));
    CHECK(std::abs(result.validity.bias) <= result.validity.rmse + 1e-15);
}

TEST_CASE("explicit proficiency lists are honored") {
    SimulationConfig config =
        base_config(generate_item_bank({50, Model::TwoPL, 0.0, 10}), 1);
    config.examinees = std::vector<Theta>{-1.5, 0.0, 2.0};
    const SimulationResult result = simulate(config);
    REQUIRE(result.states.size() == 3);
    CHECK(result.states[0].true_theta == -1.5);
    CHECK(result.states[1].true_theta == 0.0);
    CHECK(result.states[2].true_theta == 2.0);
}

TEST_CASE("bad configurations fail before any work") {
    SimulationConfig config = base_config(ItemBank{}, 5);
    CHECK_THROWS_AS(simulate(config), DomainError);

    config = base_config(generate_item_bank({30, Model::TwoPL, 0.0, 11}), 0);
    CHECK_THROWS_AS(simulate(config), DomainError);

    config = base_config(generate_item_bank({30, Model::TwoPL, 0.0, 11}), 5);
    config.examinees = std::vector<Theta>{};
    CHECK_THROWS_AS(simulate(config), DomainError);

    // Stratified selector with no stratum count and a non-fixed stopper.
    config = base_config(generate_item_bank({30, Model::TwoPL, 0.0, 11}), 5);
    config.selector.kind = SelectorKind::AStratified;
    config.stopper.kind = StopperConfig::Kind::MinError;
    config.stopper.see_threshold = 0.3;
    CHECK_THROWS_AS(simulate(config), DomainError);
    config.selector.strata = 10;
    CHECK_NOTHROW(simulate(config));
}

TEST_CASE("stratified selectors run inside full simulations") {
    for (const SelectorKind kind :
         {SelectorKind::AStratified, SelectorKind::AStratifiedBBlocking,
          SelectorKind::MaxInfoStratified, SelectorKind::MaxInfoBBlocking}) {
        SimulationConfig config =
            base_config(generate_item_bank({60, Model::ThreePL, 0.0, 12}), 6);
        config.selector.kind = kind;
        config.stopper.max_items = 12;
        const SimulationResult result = simulate(config);
        for (const ExamineeState& state : result.states) {
            CHECK(state.administered.size() == 12);
        }
    }
}
