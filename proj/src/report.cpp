#include "catforge/report.hpp"

#include <fstream>
#include <sstream>

#include "detail_format.hpp"

namespace catforge {

namespace {

using detail::format_full;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& token, const std::filesystem::path& path,
                    std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": cannot parse '" + token + "' as a number");
    }
}

std::string trajectory_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "examinee_%03zu.csv", index);
    return buf;
}

}  // namespace

void write_trajectory_csv(const ExamineeState& state,
                          const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "step,item_index,response,theta_hat,see,var,info\n";
    for (std::size_t t = 0; t < state.administered.size(); ++t) {
        out << (t + 1) << ',' << state.administered[t] << ','
            << (state.responses[t] ? 1 : 0) << ','
            << format_full(state.estimates[t + 1]) << ','
            << format_full(state.see_trace[t]) << ','
            << format_full(state.var_trace[t]) << ','
            << format_full(state.info_trace[t]) << '\n';
    }
    if (!out) throw ParseError("failed writing: " + path.string());
}

ExamineeState load_trajectory_csv(const std::filesystem::path& path,
                                  const ExamineeSummary& summary) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trajectory file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty trajectory file");
    }
    ExamineeState state;
    state.true_theta = summary.true_theta;
    state.exhausted = summary.exhausted;
    state.estimates.push_back(summary.initial_theta_hat);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 7) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": expected 7 columns");
        }
        state.administered.push_back(
            static_cast<std::size_t>(parse_double(fields[1], path, line_no)));
        state.responses.push_back(parse_double(fields[2], path, line_no) != 0.0);
        state.estimates.push_back(parse_double(fields[3], path, line_no));
        state.see_trace.push_back(parse_double(fields[4], path, line_no));
        state.var_trace.push_back(parse_double(fields[5], path, line_no));
        state.info_trace.push_back(parse_double(fields[6], path, line_no));
    }
    return state;
}

std::vector<ExamineeSummary> load_examinee_summaries(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open examinee summary file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty examinee summary file");
    }
    std::vector<ExamineeSummary> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": expected 6 columns");
        }
        ExamineeSummary summary;
        summary.index = static_cast<std::size_t>(parse_double(fields[0], path, line_no));
        summary.true_theta = parse_double(fields[1], path, line_no);
        summary.initial_theta_hat = parse_double(fields[2], path, line_no);
        summary.final_theta_hat = parse_double(fields[3], path, line_no);
        summary.test_length =
            static_cast<std::size_t>(parse_double(fields[4], path, line_no));
        summary.exhausted = parse_double(fields[5], path, line_no) != 0.0;
        out.push_back(summary);
    }
    return out;
}

RunOutputs write_run_outputs(const SimulationResult& result,
                             const nlohmann::json& config_echo, std::uint64_t seed,
                             const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunOutputs outputs;

    for (std::size_t j = 0; j < result.states.size(); ++j) {
        const auto path = out_dir / trajectory_name(j);
        write_trajectory_csv(result.states[j], path);
        outputs.trajectories.push_back(path);
    }

    outputs.examinees = out_dir / "examinees.csv";
    {
        auto out = open_out(outputs.examinees);
        out << "index,true_theta,initial_theta_hat,final_theta_hat,length,exhausted\n";
        for (std::size_t j = 0; j < result.states.size(); ++j) {
            const ExamineeState& state = result.states[j];
            out << j << ',' << format_full(state.true_theta) << ','
                << format_full(state.estimates.front()) << ','
                << format_full(state.estimates.back()) << ','
                << state.administered.size() << ',' << (state.exhausted ? 1 : 0)
                << '\n';
        }
    }

    outputs.exposure = out_dir / "exposure.csv";
    save_bank_csv(result.bank, outputs.exposure);

    outputs.validity = out_dir / "validity.csv";
    {
        double total_length = 0.0;
        for (const ExamineeState& state : result.states) {
            total_length += static_cast<double>(state.administered.size());
        }
        const double mean_length =
            result.states.empty()
                ? 0.0
                : total_length / static_cast<double>(result.states.size());
        auto out = open_out(outputs.validity);
        out << "bias,mse,rmse,overlap,examinees,mean_test_length\n";
        out << format_full(result.validity.bias) << ','
            << format_full(result.validity.mse) << ','
            << format_full(result.validity.rmse) << ','
            << format_full(result.validity.overlap) << ',' << result.states.size()
            << ',' << format_full(mean_length) << '\n';
    }

    outputs.manifest = out_dir / "manifest.json";
    {
        nlohmann::json manifest;
        manifest["schema_version"] = 1;
        manifest["tool"] = {{"name", "catforge"}, {"version", "0.1.0"}};
        manifest["seed"] = seed;
        manifest["config"] = config_echo;
        nlohmann::json files;
        files["examinees"] = outputs.examinees.filename().string();
        files["exposure"] = outputs.exposure.filename().string();
        files["validity"] = outputs.validity.filename().string();
        nlohmann::json trajectories = nlohmann::json::array();
        for (const auto& path : outputs.trajectories) {
            trajectories.push_back(path.filename().string());
        }
        files["trajectories"] = trajectories;
        manifest["outputs"] = files;
        manifest["validity"] = {{"bias", result.validity.bias},
                                {"mse", result.validity.mse},
                                {"rmse", result.validity.rmse},
                                {"overlap", result.validity.overlap}};
        manifest["examinee_count"] = result.states.size();
        auto out = open_out(outputs.manifest);
        out << manifest.dump(2) << '\n';
    }
    return outputs;
}

}  // namespace catforge
