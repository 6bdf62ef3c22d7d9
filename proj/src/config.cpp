#include "catforge/config.hpp"

#include <fstream>
#include <set>

#include "catforge/rng.hpp"

namespace catforge {

namespace {

using nlohmann::json;

/// Strict object reader: every key must be consumed, numbers must have the
/// requested type, and error messages carry the JSON path.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ParseError(path_ + ": expected an object");
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(path_ + ": " + message);
    }

    bool has(const char* key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    const json& require(const char* key) {
        seen_.insert(key);
        if (!node_.contains(key)) fail(std::string("missing required key '") + key + "'");
        return node_.at(key);
    }

    Reader object(const char* key) { return Reader(require(key), child(key)); }

    std::optional<Reader> optional_object(const char* key) {
        if (!has(key)) return std::nullopt;
        return Reader(node_.at(key), child(key));
    }

    std::string string(const char* key) {
        const json& v = require(key);
        if (!v.is_string()) throw ParseError(child(key) + ": expected a string");
        return v.get<std::string>();
    }

    double number(const char* key) {
        const json& v = require(key);
        if (!v.is_number()) throw ParseError(child(key) + ": expected a number");
        return v.get<double>();
    }

    double number_or(const char* key, double fallback) {
        if (!has(key)) return fallback;
        return number(key);
    }

    std::uint64_t unsigned_integer(const char* key) {
        const json& v = require(key);
        if (!v.is_number_unsigned()) {
            throw ParseError(child(key) + ": expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::uint64_t unsigned_integer_or(const char* key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        return unsigned_integer(key);
    }

    std::vector<double> number_array(const char* key) {
        const json& v = require(key);
        if (!v.is_array()) throw ParseError(child(key) + ": expected an array");
        std::vector<double> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                throw ParseError(child(key) + "[" + std::to_string(i) +
                                 "]: expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::size_t> index_array(const char* key) {
        const json& v = require(key);
        if (!v.is_array()) throw ParseError(child(key) + ": expected an array");
        std::vector<std::size_t> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_unsigned()) {
                throw ParseError(child(key) + "[" + std::to_string(i) +
                                 "]: expected a nonnegative integer");
            }
            out.push_back(v[i].get<std::size_t>());
        }
        return out;
    }

    /// Call last: rejects any key that was never requested.
    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            (void)value;
            if (!seen_.contains(key)) {
                throw ParseError(path_ + ": unknown key '" + key + "'");
            }
        }
    }

    std::string child(const char* key) const { return path_ + "." + key; }
    const std::string& path() const { return path_; }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

BankSource parse_bank(Reader r) {
    BankSource out;
    const bool has_file = r.has("file");
    const bool has_generate = r.has("generate");
    if (has_file == has_generate) {
        r.fail("exactly one of 'file' or 'generate' is required");
    }
    if (has_file) {
        const json& v = r.require("file");
        if (!v.is_string()) throw ParseError(r.child("file") + ": expected a string");
        out.file = std::filesystem::path(v.get<std::string>());
    } else {
        Reader g = r.object("generate");
        BankGenSpec spec;
        spec.size = static_cast<std::size_t>(g.unsigned_integer("size"));
        spec.model = model_from_string(g.string("model"));
        spec.corr = g.number_or("corr", 0.0);
        out.generate_seed_given = g.has("seed");
        if (out.generate_seed_given) spec.seed = g.unsigned_integer("seed");
        g.finish();
        out.generate = spec;
    }
    r.finish();
    return out;
}

ExamineeSpec parse_examinees(Reader r) {
    const bool has_count = r.has("count");
    const bool has_thetas = r.has("thetas");
    if (has_count == has_thetas) {
        r.fail("exactly one of 'count' or 'thetas' is required");
    }
    ExamineeSpec out;
    if (has_count) {
        out = static_cast<std::size_t>(r.unsigned_integer("count"));
    } else {
        out = r.number_array("thetas");
    }
    r.finish();
    return out;
}

InitializerConfig parse_initializer(Reader r) {
    InitializerConfig out;
    const std::string kind = r.string("kind");
    if (kind == "fixed") {
        out.kind = InitializerConfig::Kind::Fixed;
        out.fixed_value = r.number("value");
    } else if (kind == "random") {
        out.kind = InitializerConfig::Kind::Random;
        if (auto dist = r.optional_object("distribution")) {
            const std::string dist_kind = dist->string("kind");
            if (dist_kind == "uniform") {
                out.distribution = UniformDist{dist->number("lo"), dist->number("hi")};
            } else if (dist_kind == "normal") {
                out.distribution = NormalDist{dist->number("mean"), dist->number("sd")};
            } else {
                dist->fail("unknown distribution kind '" + dist_kind + "'");
            }
            dist->finish();
        }
    } else {
        r.fail("unknown initializer kind '" + kind + "'");
    }
    r.finish();
    out.check();
    return out;
}

SelectorConfig parse_selector(Reader r) {
    SelectorConfig out;
    out.kind = selector_kind_from_string(r.string("kind"));
    switch (out.kind) {
        case SelectorKind::Randomesque:
        case SelectorKind::The54321:
            out.n = static_cast<std::size_t>(r.unsigned_integer_or("n", 5));
            break;
        case SelectorKind::Linear:
            out.indexes = r.index_array("indexes");
            break;
        case SelectorKind::IntervalIntegration:
            out.delta = r.number_or("delta", 0.5);
            break;
        case SelectorKind::Cluster: {
            out.clusters = static_cast<std::size_t>(r.unsigned_integer_or("clusters", 8));
            if (r.has("strategy")) {
                const std::string strategy = r.string("strategy");
                if (strategy == "most_informative_member") {
                    out.cluster_strategy = ClusterStrategy::MostInformativeMember;
                } else if (strategy == "highest_mean_info") {
                    out.cluster_strategy = ClusterStrategy::HighestMeanInfo;
                } else {
                    r.fail("unknown cluster strategy '" + strategy + "'");
                }
            }
            break;
        }
        case SelectorKind::AStratified:
        case SelectorKind::AStratifiedBBlocking:
        case SelectorKind::MaxInfoStratified:
        case SelectorKind::MaxInfoBBlocking: {
            out.strata = static_cast<std::size_t>(r.unsigned_integer_or("strata", 0));
            if (r.has("within_stratum")) {
                const std::string rule = r.string("within_stratum");
                if (rule == "first_unused") {
                    out.within_stratum = StratumRule::FirstUnused;
                } else if (rule == "closest_b") {
                    out.within_stratum = StratumRule::ClosestB;
                } else {
                    r.fail("unknown within_stratum rule '" + rule + "'");
                }
            }
            break;
        }
        default:
            break;
    }
    r.finish();
    out.check();
    return out;
}

EstimatorConfig parse_estimator(Reader r) {
    EstimatorConfig out;
    out.kind = estimator_kind_from_string(r.string("kind"));
    if (r.has("bounds")) {
        const auto bounds = r.number_array("bounds");
        if (bounds.size() != 2) {
            r.fail("'bounds' must hold exactly [lo, hi]");
        }
        out.bounds = std::make_pair(bounds[0], bounds[1]);
    }
    r.finish();
    out.check();
    return out;
}

StopperConfig parse_stopper(Reader r) {
    StopperConfig out;
    const std::string kind = r.string("kind");
    if (kind == "max_item") {
        out.kind = StopperConfig::Kind::MaxItem;
        out.max_items = static_cast<std::size_t>(r.unsigned_integer("max_items"));
    } else if (kind == "min_error") {
        out.kind = StopperConfig::Kind::MinError;
        out.see_threshold = r.number("see_threshold");
        out.min_items_guard =
            static_cast<std::size_t>(r.unsigned_integer_or("min_items", 1));
    } else {
        r.fail("unknown stopper kind '" + kind + "'");
    }
    r.finish();
    out.check();
    return out;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    Reader r(j, "$");
    if (r.has("version")) {
        const std::uint64_t version = r.unsigned_integer("version");
        if (version != 1) r.fail("unsupported config version " + std::to_string(version));
    }
    RunConfig out;
    out.bank = parse_bank(r.object("bank"));
    out.examinees = parse_examinees(r.object("examinees"));
    out.initializer = parse_initializer(r.object("initializer"));
    out.selector = parse_selector(r.object("selector"));
    out.estimator = parse_estimator(r.object("estimator"));
    out.stopper = parse_stopper(r.object("stopper"));
    out.seed = r.unsigned_integer("seed");
    if (r.has("output")) {
        const json& v = r.require("output");
        if (!v.is_string()) throw ParseError(r.child("output") + ": expected a string");
        out.output_dir = v.get<std::string>();
    }
    r.finish();
    return out;
}

json run_config_to_json(const RunConfig& config) {
    json j;
    j["version"] = 1;

    json bank;
    if (config.bank.file) {
        bank["file"] = config.bank.file->string();
    } else if (config.bank.generate) {
        json gen;
        gen["size"] = config.bank.generate->size;
        gen["model"] = std::string(to_string(config.bank.generate->model));
        gen["corr"] = config.bank.generate->corr;
        if (config.bank.generate_seed_given) gen["seed"] = config.bank.generate->seed;
        bank["generate"] = gen;
    }
    j["bank"] = bank;

    json examinees;
    if (const auto* count = std::get_if<std::size_t>(&config.examinees)) {
        examinees["count"] = *count;
    } else {
        examinees["thetas"] = std::get<std::vector<Theta>>(config.examinees);
    }
    j["examinees"] = examinees;

    json initializer;
    if (config.initializer.kind == InitializerConfig::Kind::Fixed) {
        initializer["kind"] = "fixed";
        initializer["value"] = config.initializer.fixed_value;
    } else {
        initializer["kind"] = "random";
        json dist;
        if (const auto* u = std::get_if<UniformDist>(&config.initializer.distribution)) {
            dist["kind"] = "uniform";
            dist["lo"] = u->lo;
            dist["hi"] = u->hi;
        } else {
            const auto& n = std::get<NormalDist>(config.initializer.distribution);
            dist["kind"] = "normal";
            dist["mean"] = n.mean;
            dist["sd"] = n.sd;
        }
        initializer["distribution"] = dist;
    }
    j["initializer"] = initializer;

    json selector;
    selector["kind"] = std::string(to_string(config.selector.kind));
    switch (config.selector.kind) {
        case SelectorKind::Randomesque:
        case SelectorKind::The54321:
            selector["n"] = config.selector.n;
            break;
        case SelectorKind::Linear:
            selector["indexes"] = config.selector.indexes;
            break;
        case SelectorKind::IntervalIntegration:
            selector["delta"] = config.selector.delta;
            break;
        case SelectorKind::Cluster:
            selector["clusters"] = config.selector.clusters;
            selector["strategy"] =
                config.selector.cluster_strategy == ClusterStrategy::MostInformativeMember
                    ? "most_informative_member"
                    : "highest_mean_info";
            break;
        case SelectorKind::AStratified:
        case SelectorKind::AStratifiedBBlocking:
        case SelectorKind::MaxInfoStratified:
        case SelectorKind::MaxInfoBBlocking:
            if (config.selector.strata != 0) selector["strata"] = config.selector.strata;
            selector["within_stratum"] =
                config.selector.within_stratum == StratumRule::FirstUnused
                    ? "first_unused"
                    : "closest_b";
            break;
        default:
            break;
    }
    j["selector"] = selector;

    json estimator;
    estimator["kind"] = std::string(to_string(config.estimator.kind));
    if (config.estimator.bounds) {
        estimator["bounds"] = {config.estimator.bounds->first,
                               config.estimator.bounds->second};
    }
    j["estimator"] = estimator;

    json stopper;
    if (config.stopper.kind == StopperConfig::Kind::MaxItem) {
        stopper["kind"] = "max_item";
        stopper["max_items"] = config.stopper.max_items;
    } else {
        stopper["kind"] = "min_error";
        stopper["see_threshold"] = config.stopper.see_threshold;
        stopper["min_items"] = config.stopper.min_items_guard;
    }
    j["stopper"] = stopper;

    j["seed"] = config.seed;
    if (config.output_dir) j["output"] = *config.output_dir;
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("schema_version")) {
        // Run manifest: re-run from its embedded config.
        return parse_run_config(j.at("config"));
    }
    return parse_run_config(j);
}

SimulationConfig resolve(const RunConfig& config) {
    SimulationConfig out;
    if (config.bank.file) {
        out.bank = load_bank_csv(*config.bank.file);
    } else if (config.bank.generate) {
        BankGenSpec spec = *config.bank.generate;
        if (!config.bank.generate_seed_given) {
            spec.seed = derive_seed(config.seed, kSeedStreamBank);
        }
        out.bank = generate_item_bank(spec);
    } else {
        throw DomainError("bank source is empty");
    }
    out.examinees = config.examinees;
    out.initializer = config.initializer;
    out.selector = config.selector;
    out.estimator = config.estimator;
    out.stopper = config.stopper;
    out.seed = config.seed;
    return out;
}

}  // namespace catforge
