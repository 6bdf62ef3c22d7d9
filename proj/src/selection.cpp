#include "catforge/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>
#include <optional>

#include "catforge/irt.hpp"
#include "catforge/kmeans.hpp"
#include "catforge/quadrature.hpp"
#include "catforge/rng.hpp"

namespace catforge {

namespace {

std::vector<char> used_mask(const SelectionContext& ctx) {
    std::vector<char> used(ctx.bank->size(), 0);
    for (std::size_t index : ctx.administered) used[index] = 1;
    return used;
}

std::size_t remaining_count(const SelectionContext& ctx) {
    return ctx.bank->size() - ctx.administered.size();
}

[[noreturn]] void throw_exhausted(std::string_view selector) {
    throw ExhaustionError(std::string(selector) + ": no non-administered item left");
}

/// Argmax of `score` over non-administered indices; ties keep the lowest
/// index because only strict improvement replaces the incumbent.
template <class Score>
std::size_t argmax_unused(const SelectionContext& ctx, const std::vector<char>& used,
                          std::string_view name, Score&& score) {
    bool found = false;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < ctx.bank->size(); ++i) {
        if (used[i]) continue;
        const double s = score(i);
        if (!found || s > best_score) {
            found = true;
            best = i;
            best_score = s;
        }
    }
    if (!found) throw_exhausted(name);
    return best;
}

/// Indices of the `n` highest-information unused items at the current
/// estimate, ordered by information descending with index ascending on ties.
std::vector<std::size_t> top_informative(const SelectionContext& ctx,
                                         const std::vector<char>& used, std::size_t n) {
    std::vector<std::size_t> candidates;
    candidates.reserve(remaining_count(ctx));
    for (std::size_t i = 0; i < ctx.bank->size(); ++i) {
        if (!used[i]) candidates.push_back(i);
    }
    std::vector<double> info(ctx.bank->size(), 0.0);
    for (std::size_t i : candidates) {
        info[i] = irt::inf(ctx.est_theta, ctx.bank->item(i));
    }
    const std::size_t take = std::min(n, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      [&](std::size_t lhs, std::size_t rhs) {
                          if (info[lhs] != info[rhs]) return info[lhs] > info[rhs];
                          return lhs < rhs;
                      });
    candidates.resize(take);
    return candidates;
}

class MaxInfoSelector final : public Selector {
public:
    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const auto used = used_mask(ctx);
        return argmax_unused(ctx, used, name(), [&](std::size_t i) {
            return irt::inf(ctx.est_theta, ctx.bank->item(i));
        });
    }
    std::string_view name() const noexcept override { return "max_info"; }
};

class LinearSelector final : public Selector {
public:
    explicit LinearSelector(std::vector<std::size_t> indexes)
        : indexes_(std::move(indexes)) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const std::size_t position = ctx.administered.size();
        if (position >= indexes_.size()) {
            throw ExhaustionError("linear: fixed sequence of " +
                                  std::to_string(indexes_.size()) + " items exhausted");
        }
        const std::size_t index = indexes_[position];
        if (index >= ctx.bank->size()) {
            throw DomainError("linear: index " + std::to_string(index) +
                              " out of range for bank of size " +
                              std::to_string(ctx.bank->size()));
        }
        if (std::find(ctx.administered.begin(), ctx.administered.end(), index) !=
            ctx.administered.end()) {
            throw DomainError("linear: index " + std::to_string(index) +
                              " was already administered");
        }
        return index;
    }
    std::string_view name() const noexcept override { return "linear"; }

private:
    std::vector<std::size_t> indexes_;
};

class RandomSelector final : public Selector {
public:
    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const auto used = used_mask(ctx);
        std::vector<std::size_t> candidates;
        candidates.reserve(remaining_count(ctx));
        for (std::size_t i = 0; i < used.size(); ++i) {
            if (!used[i]) candidates.push_back(i);
        }
        if (candidates.empty()) throw_exhausted(name());
        Rng rng(ctx.rng_seed);
        return candidates[rng.uniform_index(candidates.size())];
    }
    std::string_view name() const noexcept override { return "random"; }
};

class RandomesqueSelector final : public Selector {
public:
    explicit RandomesqueSelector(std::size_t n) : n_(n) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        return pick(ctx, n_, name());
    }
    std::string_view name() const noexcept override { return "randomesque"; }

    static std::size_t pick(const SelectionContext& ctx, std::size_t n,
                            std::string_view name) {
        const auto used = used_mask(ctx);
        const auto pool = top_informative(ctx, used, n);
        if (pool.empty()) throw_exhausted(name);
        if (pool.size() == 1) return pool.front();
        Rng rng(ctx.rng_seed);
        return pool[rng.uniform_index(pool.size())];
    }

private:
    std::size_t n_;
};

class The54321Selector final : public Selector {
public:
    explicit The54321Selector(std::size_t n) : n_(n) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        // Pool shrinks by one per administered item; the tail of the test
        // degenerates to pure maximum information.
        const std::size_t administered = ctx.administered.size();
        const std::size_t effective = n_ > administered ? n_ - administered : 1;
        return RandomesqueSelector::pick(ctx, effective, name());
    }
    std::string_view name() const noexcept override { return "54321"; }

private:
    std::size_t n_;
};

/// Shared machinery for the four stratification selectors. Strata are
/// lists of original bank indices; their concatenation holds every item
/// exactly once and sizes differ by at most one.
class StratifiedSelector : public Selector {
public:
    StratifiedSelector(bool b_blocking, bool rank_by_max_info, StratumRule rule,
                       std::size_t strata)
        : b_blocking_(b_blocking),
          rank_by_max_info_(rank_by_max_info),
          rule_(rule),
          strata_(strata) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const std::size_t k_count = stratum_count(ctx);
        const auto strata = build_strata(*ctx.bank, k_count);
        const auto used = used_mask(ctx);

        // Position beyond the last stratum stays in the last stratum; a
        // test may outlive K when the stopper is not a fixed length.
        const std::size_t position = std::min(ctx.administered.size(), k_count - 1);
        for (std::size_t probe = 0; probe < k_count; ++probe) {
            const std::size_t stratum = (position + probe) % k_count;
            if (auto choice = pick_in_stratum(ctx, strata[stratum], used)) {
                return *choice;
            }
            // Stratum exhausted: fall through to the next one.
        }
        throw_exhausted(name());
    }

    std::string_view name() const noexcept override {
        if (b_blocking_) {
            return rank_by_max_info_ ? "max_info_b_blocking" : "a_stratified_b_blocking";
        }
        return rank_by_max_info_ ? "max_info_stratified" : "a_stratified";
    }

private:
    std::size_t stratum_count(const SelectionContext& ctx) const {
        const std::size_t k_count = strata_ != 0 ? strata_ : ctx.test_length;
        if (k_count == 0) {
            throw DomainError(std::string(name()) +
                              ": stratum count required (config strata or a "
                              "fixed test length in the context)");
        }
        if (k_count > ctx.bank->size()) {
            throw DomainError(std::string(name()) + ": stratum count " +
                              std::to_string(k_count) + " exceeds bank size " +
                              std::to_string(ctx.bank->size()));
        }
        return k_count;
    }

    double rank_value(const Item& item) const {
        return rank_by_max_info_ ? irt::inf(irt::max_info(item), item) : item.a;
    }

    std::vector<std::vector<std::size_t>> build_strata(const ItemBank& bank,
                                                       std::size_t k_count) const {
        const std::size_t n = bank.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);

        std::vector<double> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = rank_value(bank.item(i));

        std::vector<std::vector<std::size_t>> strata(k_count);
        if (!b_blocking_) {
            // Ascending rank, contiguous near-equal strata; the first
            // n % K strata take the remainder items.
            std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
                if (key[l] != key[r]) return key[l] < key[r];
                return l < r;
            });
            const std::size_t base = n / k_count;
            const std::size_t extra = n % k_count;
            std::size_t offset = 0;
            for (std::size_t s = 0; s < k_count; ++s) {
                const std::size_t len = base + (s < extra ? 1 : 0);
                strata[s].assign(order.begin() + offset, order.begin() + offset + len);
                offset += len;
            }
            return strata;
        }

        // b-blocking: sort by difficulty, cut into blocks of K, and give
        // each stratum one item per block (the j-th lowest rank in the
        // block goes to stratum j). Difficulty ends up near-uniform
        // across strata even when a and b correlate.
        std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
            if (bank.item(l).b != bank.item(r).b) return bank.item(l).b < bank.item(r).b;
            return l < r;
        });
        for (std::size_t start = 0; start < n; start += k_count) {
            const std::size_t len = std::min(k_count, n - start);
            std::vector<std::size_t> block(order.begin() + start,
                                           order.begin() + start + len);
            std::sort(block.begin(), block.end(), [&](std::size_t l, std::size_t r) {
                if (key[l] != key[r]) return key[l] < key[r];
                return l < r;
            });
            for (std::size_t j = 0; j < block.size(); ++j) {
                strata[j].push_back(block[j]);
            }
        }
        return strata;
    }

    std::optional<std::size_t> pick_in_stratum(const SelectionContext& ctx,
                                               const std::vector<std::size_t>& stratum,
                                               const std::vector<char>& used) const {
        if (rule_ == StratumRule::FirstUnused) {
            for (std::size_t index : stratum) {
                if (!used[index]) return index;
            }
            return std::nullopt;
        }
        std::optional<std::size_t> best;
        double best_gap = 0.0;
        for (std::size_t index : stratum) {
            if (used[index]) continue;
            const double gap = std::abs(ctx.bank->item(index).b - ctx.est_theta);
            if (!best || gap < best_gap) {
                best = index;
                best_gap = gap;
            }
        }
        return best;
    }

    bool b_blocking_;
    bool rank_by_max_info_;
    StratumRule rule_;
    std::size_t strata_;
};

class ClusterSelector final : public Selector {
public:
    ClusterSelector(std::size_t clusters, ClusterStrategy strategy)
        : clusters_(clusters), strategy_(strategy) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const ItemBank& bank = *ctx.bank;
        if (clusters_ > bank.size()) {
            throw DomainError("cluster: cluster count " + std::to_string(clusters_) +
                              " exceeds bank size " + std::to_string(bank.size()));
        }
        const std::vector<std::size_t>& assignment = assignments_for(bank);
        const auto used = used_mask(ctx);

        std::vector<double> info(bank.size());
        for (std::size_t i = 0; i < bank.size(); ++i) {
            info[i] = irt::inf(ctx.est_theta, bank.item(i));
        }

        // Rank clusters by the strategy's figure of merit; exhausted
        // clusters fall through to the next best one.
        std::vector<double> merit(clusters_, -1.0);
        std::vector<std::size_t> counts(clusters_, 0);
        for (std::size_t i = 0; i < bank.size(); ++i) {
            const std::size_t c = assignment[i];
            ++counts[c];
            if (strategy_ == ClusterStrategy::MostInformativeMember) {
                merit[c] = std::max(merit[c], info[i]);
            } else {
                merit[c] = (merit[c] < 0.0 ? 0.0 : merit[c]) + info[i];
            }
        }
        if (strategy_ == ClusterStrategy::HighestMeanInfo) {
            for (std::size_t c = 0; c < clusters_; ++c) {
                if (counts[c] > 0) merit[c] /= static_cast<double>(counts[c]);
            }
        }
        std::vector<std::size_t> cluster_order(clusters_);
        std::iota(cluster_order.begin(), cluster_order.end(), 0);
        std::sort(cluster_order.begin(), cluster_order.end(),
                  [&](std::size_t l, std::size_t r) {
                      if (merit[l] != merit[r]) return merit[l] > merit[r];
                      return l < r;
                  });

        for (std::size_t c : cluster_order) {
            bool found = false;
            std::size_t best = 0;
            double best_info = 0.0;
            for (std::size_t i = 0; i < bank.size(); ++i) {
                if (assignment[i] != c || used[i]) continue;
                if (!found || info[i] > best_info) {
                    found = true;
                    best = i;
                    best_info = info[i];
                }
            }
            if (found) return best;
        }
        throw_exhausted(name());
    }

    std::string_view name() const noexcept override { return "cluster"; }

private:
    /// Clustering is a pure function of the bank's parameter matrix and k:
    /// the k-means seed derives from a content hash, so any context using
    /// the same bank reuses one deterministic clustering. The memo keeps
    /// the most recent bank and is guarded for concurrent examinees.
    const std::vector<std::size_t>& assignments_for(const ItemBank& bank) const {
        std::vector<double> params;
        params.reserve(bank.size() * 4);
        for (const Item& item : bank.items()) {
            params.push_back(item.a);
            params.push_back(item.b);
            params.push_back(item.c);
            params.push_back(item.d);
        }

        std::scoped_lock lock(mutex_);
        if (params == cached_params_ && !cached_assignment_.empty()) {
            return cached_assignment_;
        }

        const std::size_t n = bank.size();
        std::vector<std::vector<double>> features(n, std::vector<double>(4, 0.0));
        for (std::size_t col = 0; col < 4; ++col) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += params[i * 4 + col];
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double diff = params[i * 4 + col] - mean;
                var += diff * diff;
            }
            const double sd = std::sqrt(var / static_cast<double>(n));
            for (std::size_t i = 0; i < n; ++i) {
                features[i][col] = sd > 0.0 ? (params[i * 4 + col] - mean) / sd : 0.0;
            }
        }

        std::uint64_t content_seed = 0x9E3779B97F4A7C15ULL ^ clusters_;
        for (double p : params) {
            std::uint64_t bits;
            std::memcpy(&bits, &p, sizeof(bits));
            content_seed = mix64(content_seed ^ bits);
        }

        cached_assignment_ = kmeans(features, clusters_, content_seed).assignment;
        cached_params_ = std::move(params);
        return cached_assignment_;
    }

    std::size_t clusters_;
    ClusterStrategy strategy_;
    mutable std::mutex mutex_;
    mutable std::vector<double> cached_params_;
    mutable std::vector<std::size_t> cached_assignment_;
};

class IntervalIntegrationSelector final : public Selector {
public:
    explicit IntervalIntegrationSelector(double delta)
        : delta_(delta), rule_(21) {}

    std::size_t select(const SelectionContext& ctx) const override {
        ctx.check();
        const auto used = used_mask(ctx);
        const double lo = ctx.est_theta - delta_;
        const double hi = ctx.est_theta + delta_;
        return argmax_unused(ctx, used, name(), [&](std::size_t i) {
            const Item& item = ctx.bank->item(i);
            return rule_.integrate([&](double t) { return irt::inf(t, item); }, lo, hi);
        });
    }
    std::string_view name() const noexcept override { return "interval_integration"; }

private:
    double delta_;
    GaussLegendre rule_;
};

}  // namespace

SelectorKind selector_kind_from_string(std::string_view name) {
    if (name == "max_info") return SelectorKind::MaxInfo;
    if (name == "linear") return SelectorKind::Linear;
    if (name == "random") return SelectorKind::Random;
    if (name == "randomesque") return SelectorKind::Randomesque;
    if (name == "54321") return SelectorKind::The54321;
    if (name == "a_stratified") return SelectorKind::AStratified;
    if (name == "a_stratified_b_blocking") return SelectorKind::AStratifiedBBlocking;
    if (name == "max_info_stratified") return SelectorKind::MaxInfoStratified;
    if (name == "max_info_b_blocking") return SelectorKind::MaxInfoBBlocking;
    if (name == "cluster") return SelectorKind::Cluster;
    if (name == "interval_integration") return SelectorKind::IntervalIntegration;
    throw DomainError("unknown selector kind '" + std::string(name) + "'");
}

std::string_view to_string(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::MaxInfo: return "max_info";
        case SelectorKind::Linear: return "linear";
        case SelectorKind::Random: return "random";
        case SelectorKind::Randomesque: return "randomesque";
        case SelectorKind::The54321: return "54321";
        case SelectorKind::AStratified: return "a_stratified";
        case SelectorKind::AStratifiedBBlocking: return "a_stratified_b_blocking";
        case SelectorKind::MaxInfoStratified: return "max_info_stratified";
        case SelectorKind::MaxInfoBBlocking: return "max_info_b_blocking";
        case SelectorKind::Cluster: return "cluster";
        case SelectorKind::IntervalIntegration: return "interval_integration";
    }
    throw DomainError("invalid SelectorKind enum value");
}

void SelectorConfig::check() const {
    switch (kind) {
        case SelectorKind::Randomesque:
        case SelectorKind::The54321:
            if (n < 1) throw DomainError("selector pool size n must be >= 1");
            break;
        case SelectorKind::Linear: {
            if (indexes.empty()) {
                throw DomainError("linear selector requires a nonempty index list");
            }
            std::vector<std::size_t> sorted = indexes;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw DomainError("linear selector indexes must be unique");
            }
            break;
        }
        case SelectorKind::IntervalIntegration:
            if (!(delta > 0.0) || !std::isfinite(delta)) {
                throw DomainError("interval integration delta must be finite and > 0");
            }
            break;
        case SelectorKind::Cluster:
            if (clusters < 1) throw DomainError("cluster count must be >= 1");
            break;
        default:
            break;
    }
}

void SelectionContext::check() const {
    if (bank == nullptr) throw DomainError("selection context has no bank");
    if (bank->empty()) throw DomainError("selection context bank is empty");
    if (!std::isfinite(est_theta)) {
        throw DomainError("selection context estimate must be finite");
    }
    std::vector<char> seen(bank->size(), 0);
    for (std::size_t index : administered) {
        if (index >= bank->size()) {
            throw DomainError("administered index " + std::to_string(index) +
                              " out of range");
        }
        if (seen[index]) {
            throw DomainError("administered index " + std::to_string(index) +
                              " repeats");
        }
        seen[index] = 1;
    }
}

std::unique_ptr<Selector> make_selector(const SelectorConfig& config) {
    config.check();
    switch (config.kind) {
        case SelectorKind::MaxInfo:
            return std::make_unique<MaxInfoSelector>();
        case SelectorKind::Linear:
            return std::make_unique<LinearSelector>(config.indexes);
        case SelectorKind::Random:
            return std::make_unique<RandomSelector>();
        case SelectorKind::Randomesque:
            return std::make_unique<RandomesqueSelector>(config.n);
        case SelectorKind::The54321:
            return std::make_unique<The54321Selector>(config.n);
        case SelectorKind::AStratified:
            return std::make_unique<StratifiedSelector>(false, false,
                                                        config.within_stratum,
                                                        config.strata);
        case SelectorKind::AStratifiedBBlocking:
            return std::make_unique<StratifiedSelector>(true, false,
                                                        config.within_stratum,
                                                        config.strata);
        case SelectorKind::MaxInfoStratified:
            return std::make_unique<StratifiedSelector>(false, true,
                                                        config.within_stratum,
                                                        config.strata);
        case SelectorKind::MaxInfoBBlocking:
            return std::make_unique<StratifiedSelector>(true, true,
                                                        config.within_stratum,
                                                        config.strata);
        case SelectorKind::Cluster:
            return std::make_unique<ClusterSelector>(config.clusters,
                                                     config.cluster_strategy);
        case SelectorKind::IntervalIntegration:
            return std::make_unique<IntervalIntegrationSelector>(config.delta);
    }
    throw DomainError("invalid SelectorKind enum value");
}

}  // namespace catforge
