#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "catforge/simulation.hpp"

namespace catforge {

/// Where the simulation's bank comes from: a CSV file or a generation spec.
/// Exactly one of the two is set. A generation spec without an explicit
/// seed derives one from the master seed (stream 0).
struct BankSource {
    std::optional<std::filesystem::path> file;
    std::optional<BankGenSpec> generate;
    bool generate_seed_given = false;
};

/// One simulation run as expressed in the JSON config file. Schema version
/// 1; top-level keys: bank, examinees, initializer, selector, estimator,
/// stopper, seed, output (optional), version (optional). Unknown keys
/// anywhere are errors.
struct RunConfig {
    BankSource bank;
    ExamineeSpec examinees = std::size_t{1};
    InitializerConfig initializer;
    SelectorConfig selector;
    EstimatorConfig estimator;
    StopperConfig stopper;
    std::uint64_t seed = 0;
    std::optional<std::string> output_dir;
};

/// Strict parse; schema violations throw ParseError carrying the JSON path
/// (e.g. "$.selector: unknown key 'striata'").
RunConfig parse_run_config(const nlohmann::json& j);

/// Normalized echo of a config; parse(echo) reproduces the run bit-for-bit.
nlohmann::json run_config_to_json(const RunConfig& config);

/// Loads a config file. A run manifest (recognized by its "config" key) is
/// accepted too: its embedded config is used, which is how a finished run
/// is reproduced.
RunConfig load_run_config(const std::filesystem::path& path);

/// Materializes the bank and produces the in-memory simulation config.
SimulationConfig resolve(const RunConfig& config);

}  // namespace catforge
