#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "catforge/simulation.hpp"

namespace catforge {

/// Per-examinee summary row of the `examinees.csv` result file.
struct ExamineeSummary {
    std::size_t index = 0;
    double true_theta = 0.0;
    double initial_theta_hat = 0.0;
    double final_theta_hat = 0.0;
    std::size_t test_length = 0;
    bool exhausted = false;
};

struct RunOutputs {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> trajectories;
    std::filesystem::path examinees;
    std::filesystem::path exposure;
    std::filesystem::path validity;
};

/// Writes the full result set into `out_dir`:
///   examinee_XXX.csv   one per examinee; columns
///                      step,item_index,response,theta_hat,see,var,info
///   examinees.csv      per-examinee summary (true theta, first/last estimate)
///   exposure.csv       final bank in the `a,b,c,d,r` format
///   validity.csv       bias, mse, rmse, overlap, mean test length
///   manifest.json      config echo, seed, versions, output paths, validity
/// All numbers are written in full precision, so identical runs produce
/// byte-identical files. Rerunning with the manifest as the config
/// reproduces the run.
RunOutputs write_run_outputs(const SimulationResult& result,
                             const nlohmann::json& config_echo, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

void write_trajectory_csv(const ExamineeState& state,
                          const std::filesystem::path& path);

/// Reads a trajectory back into an ExamineeState; the summary row supplies
/// what the trajectory file does not carry (true theta, initial estimate,
/// exhaustion flag).
ExamineeState load_trajectory_csv(const std::filesystem::path& path,
                                  const ExamineeSummary& summary);

std::vector<ExamineeSummary> load_examinee_summaries(const std::filesystem::path& path);

}  // namespace catforge
