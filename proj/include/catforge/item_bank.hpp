#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "catforge/item.hpp"

namespace catforge {

/// Specification for random bank generation. Parameters are drawn from
/// a ~ N(1.2, 0.25), b ~ N(0, 1), c ~ N(0.25, 0.02), d ~ U(0.94, 1),
/// resampled (not clamped) when a draw lands outside the item domain.
/// Lower models fix a = 1 (1PL), c = 0 (<= 2PL) and d = 1 (<= 3PL).
/// When corr != 0, (a, b) are drawn jointly from a bivariate normal with
/// that correlation.
struct BankGenSpec {
    std::size_t size = 1;
    Model model = Model::FourPL;
    double corr = 0.0;
    std::uint64_t seed = 0;

    void check() const;
};

struct Violation {
    std::size_t row = 0;
    std::string parameter;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

/// Ordered collection of items with exposure bookkeeping. Banks are value
/// types and immutable after construction; update_exposure returns a new
/// bank, so concurrent readers never observe mutation.
///
/// Exposure is stored as cumulative counts (q_i, N): q_i tests contained
/// item i out of N administered tests, and each item's rate is r_i = q_i/N
/// (0 while N = 0). Counts keep the rates exact under incremental updates.
class ItemBank {
public:
    ItemBank() = default;
    ItemBank(std::vector<Item> items, Model model);

    std::span<const Item> items() const noexcept { return items_; }
    const Item& item(std::size_t index) const;
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    Model model() const noexcept { return model_; }

    std::uint64_t administration_count() const noexcept { return administrations_; }
    std::uint64_t usage_count(std::size_t index) const;

    /// Folds a batch of finished tests into the exposure counts; each inner
    /// list holds the item indices one test administered.
    ItemBank update_exposure(
        std::span<const std::vector<std::size_t>> administered) const;

    /// Reports every violated invariant with its item index. An empty
    /// report means the bank is valid, including model consistency
    /// (e.g. model = 2PL requires all c = 0 and d = 1).
    ValidationReport validate() const;

    double min_b() const;
    double max_b() const;
    double mean_b() const;
    double sd_b() const;  // population standard deviation

private:
    std::vector<Item> items_;
    Model model_ = Model::FourPL;
    std::vector<std::uint64_t> usage_;
    std::uint64_t administrations_ = 0;
};

ItemBank generate_item_bank(const BankGenSpec& spec);

/// Expands a matrix of 1-4 parameter columns to full 4PL items. Canonical
/// column order is (a, b, c, d); a single column is read as b with Rasch
/// defaults, two columns as (a, b), three as (a, b, c). Throws
/// ValidationError naming row and parameter if the result is invalid.
ItemBank normalize_item_bank(const std::vector<std::vector<double>>& raw);

/// CSV persistence. Header is exactly `a,b,c,d,r`, UTF-8, `.` decimal
/// separator, one item per row; parameters survive a round trip bit-exact.
ItemBank load_bank_csv(const std::filesystem::path& path);
void save_bank_csv(const ItemBank& bank, const std::filesystem::path& path);

}  // namespace catforge
