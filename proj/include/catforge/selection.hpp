#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "catforge/item_bank.hpp"

namespace catforge {

enum class SelectorKind {
    MaxInfo,
    Linear,
    Random,
    Randomesque,
    The54321,
    AStratified,
    AStratifiedBBlocking,
    MaxInfoStratified,
    MaxInfoBBlocking,
    Cluster,
    IntervalIntegration,
};

SelectorKind selector_kind_from_string(std::string_view name);
std::string_view to_string(SelectorKind kind);

enum class ClusterStrategy { MostInformativeMember, HighestMeanInfo };
enum class StratumRule { FirstUnused, ClosestB };

struct SelectorConfig {
    SelectorKind kind = SelectorKind::MaxInfo;

    /// Randomesque / 54321: size of the most-informative pool. The 54321
    /// selector shrinks it by one per administered item, floored at 1.
    std::size_t n = 5;

    /// Linear: fixed presentation order, unique in-range indices.
    std::vector<std::size_t> indexes;

    /// IntervalIntegration: half-width of the integration interval.
    double delta = 0.5;

    /// Cluster: cluster count and the rule choosing the cluster to draw
    /// from. k = 1 degenerates to plain maximum information.
    std::size_t clusters = 8;
    ClusterStrategy cluster_strategy = ClusterStrategy::MostInformativeMember;

    /// Stratified family: how to pick within the current stratum.
    /// FirstUnused walks the stratum in its sort order; ClosestB picks the
    /// unused item whose difficulty is nearest the current estimate.
    StratumRule within_stratum = StratumRule::FirstUnused;

    /// Stratified family: stratum count K. 0 means "use the context's
    /// test_length", which a fixed-length test supplies naturally.
    std::size_t strata = 0;

    void check() const;
};

struct SelectionContext {
    const ItemBank* bank = nullptr;
    std::span<const std::size_t> administered;  // presentation order, unique
    Theta est_theta = 0.0;
    std::uint64_t rng_seed = 0;   // stochastic selectors
    std::size_t test_length = 0;  // K for stratified selectors when config.strata == 0

    void check() const;
};

/// Picks the next item index for one examinee. Implementations are pure
/// given (context, config, seed) and safe to share across threads; the
/// cluster selector memoizes its clustering behind a mutex.
class Selector {
public:
    virtual ~Selector() = default;

    /// Returns a non-administered in-range index, or throws
    /// ExhaustionError when no eligible item remains.
    virtual std::size_t select(const SelectionContext& ctx) const = 0;

    virtual std::string_view name() const noexcept = 0;
};

std::unique_ptr<Selector> make_selector(const SelectorConfig& config);

}  // namespace catforge
