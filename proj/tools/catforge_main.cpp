#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catforge/charts.hpp"
#include "catforge/config.hpp"
#include "catforge/irt.hpp"
#include "catforge/report.hpp"

namespace fs = std::filesystem;
using namespace catforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // bad arguments or config file
constexpr int kExitRuntime = 2;  // failures after the config was accepted

struct GenerateArgs {
    std::size_t size = 0;
    std::string model = "4PL";
    double corr = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct SimulateArgs {
    std::string config_path;
    std::string out_dir;
    unsigned threads = 1;
};

int run_generate_bank(const GenerateArgs& args) {
    BankGenSpec spec;
    spec.size = args.size;
    spec.model = model_from_string(args.model);
    spec.corr = args.corr;
    spec.seed = args.seed;
    spec.check();

    const ItemBank bank = generate_item_bank(spec);
    save_bank_csv(bank, args.out);

    double mean_a = 0.0, mean_b = 0.0;
    for (const Item& item : bank.items()) {
        mean_a += item.a;
        mean_b += item.b;
    }
    mean_a /= static_cast<double>(bank.size());
    mean_b /= static_cast<double>(bank.size());
    std::cerr << "generated " << bank.size() << " " << to_string(spec.model)
              << " items (corr=" << spec.corr << ", seed=" << spec.seed
              << "): mean a=" << mean_a << ", mean b=" << mean_b << '\n';
    std::cout << args.out << '\n';
    return kExitOk;
}

int run_validate_bank(const std::string& path) {
    const ItemBank bank = load_bank_csv(path);
    const ValidationReport report = bank.validate();
    std::cout << report.to_string();
    if (report.ok()) std::cout << '\n';
    if (!report.ok()) {
        std::cerr << "bank failed validation with " << report.violations.size()
                  << " violation(s)\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int run_simulate(const SimulateArgs& args) {
    RunConfig run;
    try {
        run = load_run_config(args.config_path);
        if (const char* env_seed = std::getenv("CATFORGE_SEED")) {
            std::size_t used = 0;
            const std::string text(env_seed);
            run.seed = std::stoull(text, &used);
            if (used != text.size()) {
                throw ParseError("CATFORGE_SEED must be a nonnegative integer");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::string out_dir = args.out_dir;
    if (out_dir.empty() && run.output_dir) out_dir = *run.output_dir;
    if (out_dir.empty()) {
        std::cerr << "config error: no output directory (pass --out or set "
                     "'output' in the config)\n";
        return kExitUsage;
    }
    run.output_dir = out_dir;

    SimulationConfig config = resolve(run);
    config.threads = args.threads;
    const SimulationResult result = simulate(config);
    const RunOutputs outputs =
        write_run_outputs(result, run_config_to_json(run), run.seed, out_dir);

    std::cerr << "simulated " << result.states.size() << " examinees: bias="
              << result.validity.bias << ", rmse=" << result.validity.rmse
              << ", overlap=" << result.validity.overlap << '\n';
    std::cout << outputs.manifest.string() << '\n';
    return kExitOk;
}

TestProgressFlags progress_flags(bool info, bool var, bool see, bool true_theta) {
    // With no flag given, show everything; the chart requires at least one.
    if (!info && !var && !see && !true_theta) {
        return {true, true, true, true};
    }
    return {info, var, see, true_theta};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"catforge: adaptive testing simulation toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate-bank", "Generate a random item bank CSV");
    generate->add_option("--size", gen.size, "Number of items")->required();
    generate->add_option("--model", gen.model, "Logistic model: 1PL, 2PL, 3PL or 4PL");
    generate->add_option("--corr", gen.corr, "Correlation between a and b");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--out", gen.out, "Output CSV path")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate-bank", "Validate an item bank CSV");
    validate->add_option("--bank", validate_path, "Bank CSV path")->required();

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a simulation from a JSON config");
    simulate_cmd->add_option("--config", sim.config_path, "JSON config or manifest path")
        ->required();
    simulate_cmd->add_option("--out", sim.out_dir, "Output directory");
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads");

    auto* plot = app.add_subcommand("plot", "Render charts from banks or results");
    plot->require_subcommand(1);

    std::string curve_bank;
    std::size_t curve_item = 0;
    std::string curve_type = "both";
    std::string curve_out;
    auto* item_curve = plot->add_subcommand("item-curve",
                                            "Characteristic/information curve of one item");
    item_curve->add_option("--bank", curve_bank, "Bank CSV path")->required();
    item_curve->add_option("--item", curve_item, "Item index")->required();
    item_curve->add_option("--type", curve_type, "icc, iic or both");
    item_curve->add_option("--out", curve_out, "Output SVG path")->required();

    std::string progress_result;
    std::size_t progress_examinee = 0;
    bool flag_info = false, flag_var = false, flag_see = false, flag_true = false;
    std::string progress_out;
    auto* test_progress = plot->add_subcommand("test-progress",
                                               "Trace one examinee's test");
    test_progress->add_option("--result", progress_result, "Simulation result directory")
        ->required();
    test_progress->add_option("--examinee", progress_examinee, "Examinee index")
        ->required();
    test_progress->add_flag("--info", flag_info, "Trace test information");
    test_progress->add_flag("--var", flag_var, "Trace estimation variance");
    test_progress->add_flag("--see", flag_see, "Trace standard error");
    test_progress->add_flag("--true-theta", flag_true, "Reference line at true theta");
    test_progress->add_option("--out", progress_out, "Output SVG path")->required();

    std::string exposure_bank;
    std::string exposure_result;
    std::string exposure_sort;
    std::string exposure_style = "bar";
    std::string exposure_out;
    auto* item_exposure = plot->add_subcommand("item-exposure", "Exposure rates across a bank");
    item_exposure->add_option("--bank", exposure_bank, "Bank CSV path");
    item_exposure->add_option("--result", exposure_result, "Simulation result directory");
    item_exposure->add_option("--sort-par", exposure_sort, "Sort items by a, b, c, d or r");
    item_exposure->add_option("--style", exposure_style, "bar or line");
    item_exposure->add_option("--out", exposure_out, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) return run_generate_bank(gen);
        if (validate->parsed()) return run_validate_bank(validate_path);
        if (simulate_cmd->parsed()) return run_simulate(sim);

        if (item_curve->parsed()) {
            ItemCurveKind kind;
            if (curve_type == "icc") {
                kind = ItemCurveKind::Icc;
            } else if (curve_type == "iic") {
                kind = ItemCurveKind::Iic;
            } else if (curve_type == "both") {
                kind = ItemCurveKind::Both;
            } else {
                std::cerr << "usage error: --type must be icc, iic or both\n";
                return kExitUsage;
            }
            const ItemBank bank = load_bank_csv(curve_bank);
            plot_item_curve(bank.item(curve_item), kind, curve_out);
            std::cout << curve_out << '\n';
            return kExitOk;
        }

        if (test_progress->parsed()) {
            const fs::path dir = progress_result;
            const auto summaries = load_examinee_summaries(dir / "examinees.csv");
            if (progress_examinee >= summaries.size()) {
                throw DomainError("examinee index " + std::to_string(progress_examinee) +
                                  " out of range (" + std::to_string(summaries.size()) +
                                  " examinees)");
            }
            char name[32];
            std::snprintf(name, sizeof(name), "examinee_%03zu.csv", progress_examinee);
            const ExamineeState state =
                load_trajectory_csv(dir / name, summaries[progress_examinee]);
            plot_test_progress(
                state, progress_flags(flag_info, flag_var, flag_see, flag_true),
                progress_out);
            std::cout << progress_out << '\n';
            return kExitOk;
        }

        if (item_exposure->parsed()) {
            if (exposure_bank.empty() == exposure_result.empty()) {
                std::cerr << "usage error: pass exactly one of --bank or --result\n";
                return kExitUsage;
            }
            const fs::path path = exposure_bank.empty()
                                      ? fs::path(exposure_result) / "exposure.csv"
                                      : fs::path(exposure_bank);
            ExposureStyle style;
            if (exposure_style == "bar") {
                style = ExposureStyle::Bar;
            } else if (exposure_style == "line") {
                style = ExposureStyle::Line;
            } else {
                std::cerr << "usage error: --style must be bar or line\n";
                return kExitUsage;
            }
            std::optional<char> sort_par;
            if (!exposure_sort.empty()) {
                if (exposure_sort.size() != 1) {
                    std::cerr << "usage error: --sort-par must be one of a, b, c, d, r\n";
                    return kExitUsage;
                }
                sort_par = exposure_sort[0];
            }
            const ItemBank bank = load_bank_csv(path);
            plot_item_exposure(bank, sort_par, style, exposure_out);
            std::cout << exposure_out << '\n';
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
