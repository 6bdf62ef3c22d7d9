#pragma once

#include <filesystem>
#include <optional>

#include "catforge/item_bank.hpp"
#include "catforge/simulation.hpp"

namespace catforge {

enum class ItemCurveKind { Icc, Iic, Both };
enum class ExposureStyle { Bar, Line };

struct TestProgressFlags {
    bool info = false;
    bool var = false;
    bool see = false;
    bool true_theta = false;
};

/// Each plot writes a self-contained SVG plus a sidecar CSV (same path
/// with a .csv extension) carrying exactly the numeric series the SVG
/// renders; the SVG is a pure view of that data.

/// Characteristic and/or information curve over theta in [-6, 6], with the
/// maximum-information point marked.
void plot_item_curve(const Item& item, ItemCurveKind kind,
                     const std::filesystem::path& svg_path);

/// Estimate trace over the test, with optional information, variance and
/// SEE traces and the true proficiency as a horizontal reference line.
/// At least one flag must be set.
void plot_test_progress(const ExamineeState& state, TestProgressFlags flags,
                        const std::filesystem::path& svg_path);

/// Exposure rates across the bank, optionally sorted by one of the item
/// parameters ('a', 'b', 'c', 'd' or 'r').
void plot_item_exposure(const ItemBank& bank, std::optional<char> sort_par,
                        ExposureStyle style, const std::filesystem::path& svg_path);

}  // namespace catforge
