#include "catforge/item_bank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "catforge/rng.hpp"

namespace catforge {

namespace {

std::string format_param(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Model infer_model(std::span<const Item> items) {
    bool rasch = true, no_guessing = true, full_ceiling = true;
    for (const Item& item : items) {
        rasch = rasch && item.a == 1.0;
        no_guessing = no_guessing && item.c == 0.0;
        full_ceiling = full_ceiling && item.d == 1.0;
    }
    if (full_ceiling && no_guessing && rasch) return Model::OnePL;
    if (full_ceiling && no_guessing) return Model::TwoPL;
    if (full_ceiling) return Model::ThreePL;
    return Model::FourPL;
}

}  // namespace

void BankGenSpec::check() const {
    if (size < 1) throw DomainError("bank size must be >= 1");
    if (!(std::abs(corr) <= 1.0)) {
        throw DomainError("correlation must be within [-1, 1]");
    }
}

std::string ValidationReport::to_string() const {
    if (ok()) return "bank is valid";
    std::ostringstream out;
    for (const Violation& v : violations) {
        out << "item " << v.row << ": parameter " << v.parameter << ": "
            << v.message << '\n';
    }
    return out.str();
}

ItemBank::ItemBank(std::vector<Item> items, Model model)
    : items_(std::move(items)), model_(model), usage_(items_.size(), 0) {}

const Item& ItemBank::item(std::size_t index) const {
    if (index >= items_.size()) {
        throw DomainError("item index " + std::to_string(index) +
                          " out of range (bank size " +
                          std::to_string(items_.size()) + ")");
    }
    return items_[index];
}

std::uint64_t ItemBank::usage_count(std::size_t index) const {
    if (index >= usage_.size()) {
        throw DomainError("item index out of range");
    }
    return usage_[index];
}

ItemBank ItemBank::update_exposure(
    std::span<const std::vector<std::size_t>> administered) const {
    ItemBank next = *this;
    for (const auto& test : administered) {
        for (std::size_t index : test) {
            if (index >= next.items_.size()) {
                throw DomainError("administered index " +
                                  std::to_string(index) + " out of range");
            }
            ++next.usage_[index];
        }
    }
    next.administrations_ += administered.size();
    for (std::size_t i = 0; i < next.items_.size(); ++i) {
        next.items_[i].r =
            next.administrations_ == 0
                ? 0.0
                : static_cast<double>(next.usage_[i]) /
                      static_cast<double>(next.administrations_);
    }
    return next;
}

ValidationReport ItemBank::validate() const {
    ValidationReport report;
    auto flag = [&](std::size_t row, const char* parameter, std::string message) {
        report.violations.push_back({row, parameter, std::move(message)});
    };
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const Item& it = items_[i];
        if (!(std::isfinite(it.a) && it.a > 0.0)) {
            flag(i, "a", "discrimination must be finite and > 0 (got " +
                             format_param(it.a) + ")");
        }
        if (!std::isfinite(it.b)) {
            flag(i, "b", "difficulty must be finite (got " + format_param(it.b) + ")");
        }
        if (!(it.c >= 0.0)) {
            flag(i, "c", "pseudo-guessing must be >= 0 (got " + format_param(it.c) + ")");
        }
        if (!(it.c < it.d)) {
            flag(i, "c", "pseudo-guessing must be < upper asymptote (got c=" +
                             format_param(it.c) + ", d=" + format_param(it.d) + ")");
        }
        if (!(it.d <= 1.0)) {
            flag(i, "d", "upper asymptote must be <= 1 (got " + format_param(it.d) + ")");
        }
        if (!(it.r >= 0.0 && it.r <= 1.0)) {
            flag(i, "r", "exposure rate must be within [0, 1] (got " +
                             format_param(it.r) + ")");
        }
        if (model_ == Model::OnePL && it.a != 1.0) {
            flag(i, "a", "1PL requires a = 1 (got " + format_param(it.a) + ")");
        }
        if (model_ <= Model::TwoPL && it.c != 0.0) {
            flag(i, "c", std::string(to_string(model_)) + " requires c = 0 (got " +
                             format_param(it.c) + ")");
        }
        if (model_ <= Model::ThreePL && it.d != 1.0) {
            flag(i, "d", std::string(to_string(model_)) + " requires d = 1 (got " +
                             format_param(it.d) + ")");
        }
    }
    return report;
}

double ItemBank::min_b() const {
    if (items_.empty()) throw DomainError("empty bank has no difficulties");
    double out = items_[0].b;
    for (const Item& it : items_) out = std::min(out, it.b);
    return out;
}

double ItemBank::max_b() const {
    if (items_.empty()) throw DomainError("empty bank has no difficulties");
    double out = items_[0].b;
    for (const Item& it : items_) out = std::max(out, it.b);
    return out;
}

double ItemBank::mean_b() const {
    if (items_.empty()) throw DomainError("empty bank has no difficulties");
    double sum = 0.0;
    for (const Item& it : items_) sum += it.b;
    return sum / static_cast<double>(items_.size());
}

double ItemBank::sd_b() const {
    const double mean = mean_b();
    double acc = 0.0;
    for (const Item& it : items_) acc += (it.b - mean) * (it.b - mean);
    return std::sqrt(acc / static_cast<double>(items_.size()));
}

ItemBank generate_item_bank(const BankGenSpec& spec) {
    spec.check();
    Rng rng(spec.seed);
    std::vector<Item> items;
    items.reserve(spec.size);

    const bool draw_a = spec.model != Model::OnePL;
    const bool draw_c = spec.model >= Model::ThreePL;
    const bool draw_d = spec.model == Model::FourPL;
    const double rho = draw_a ? spec.corr : 0.0;
    const double rho_rest = std::sqrt(1.0 - rho * rho);

    for (std::size_t i = 0; i < spec.size; ++i) {
        Item item;
        if (draw_a) {
            // Joint (a, b) draw; resampling the pair preserves the
            // requested correlation near the a > 0 truncation.
            do {
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                item.a = 1.2 + 0.25 * z1;
                item.b = rho * z1 + rho_rest * z2;
            } while (item.a <= 0.0);
        } else {
            item.a = 1.0;
            item.b = rng.normal();
        }
        if (draw_c) {
            do {
                item.c = rng.normal(0.25, 0.02);
            } while (item.c < 0.0 || item.c >= 1.0);
        }
        if (draw_d) {
            do {
                item.d = rng.uniform(0.94, 1.0);
            } while (item.d <= item.c);
        }
        items.push_back(item);
    }
    return ItemBank(std::move(items), spec.model);
}

ItemBank normalize_item_bank(const std::vector<std::vector<double>>& raw) {
    if (raw.empty()) throw DomainError("cannot normalize an empty matrix");
    const std::size_t width = raw.front().size();
    if (width < 1 || width > 4) {
        throw DomainError("parameter matrix must have 1 to 4 columns (got " +
                          std::to_string(width) + ")");
    }
    std::vector<Item> items;
    items.reserve(raw.size());
    for (std::size_t row = 0; row < raw.size(); ++row) {
        if (raw[row].size() != width) {
            throw ShapeError("row " + std::to_string(row) + " has " +
                             std::to_string(raw[row].size()) +
                             " columns, expected " + std::to_string(width));
        }
        Item item;
        switch (width) {
            case 1:
                item.b = raw[row][0];
                break;
            case 2:
                item.a = raw[row][0];
                item.b = raw[row][1];
                break;
            case 3:
                item.a = raw[row][0];
                item.b = raw[row][1];
                item.c = raw[row][2];
                break;
            case 4:
                item.a = raw[row][0];
                item.b = raw[row][1];
                item.c = raw[row][2];
                item.d = raw[row][3];
                break;
        }
        items.push_back(item);
    }

    Model model = Model::FourPL;
    switch (width) {
        case 1: model = Model::OnePL; break;
        case 2: model = Model::TwoPL; break;
        case 3: model = Model::ThreePL; break;
        case 4: model = Model::FourPL; break;
    }
    ItemBank bank(std::move(items), model);
    if (ValidationReport report = bank.validate(); !report.ok()) {
        throw ValidationError("normalized bank is invalid:\n" + report.to_string());
    }
    return bank;
}

ItemBank load_bank_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bank file: " + path.string());

    auto strip_cr = [](std::string& line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty bank file");
    }
    strip_cr(line);
    if (line != "a,b,c,d,r") {
        throw ParseError(path.string() + ": line 1: expected header 'a,b,c,d,r', got '" +
                         line + "'");
    }

    std::vector<Item> items;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        std::array<double, 5> fields{};
        std::size_t field = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string token = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (field >= 5) {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ": expected 5 columns");
            }
            try {
                std::size_t used = 0;
                fields[field] = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ": cannot parse '" + token + "' as a number");
            }
            ++field;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (field != 5) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": expected 5 columns, got " + std::to_string(field));
        }
        items.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    }
    if (items.empty()) {
        throw ParseError(path.string() + ": bank has no items");
    }
    const Model model = infer_model(items);
    return ItemBank(std::move(items), model);
}

void save_bank_csv(const ItemBank& bank, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open bank file for writing: " + path.string());
    out << "a,b,c,d,r\n";
    for (const Item& it : bank.items()) {
        out << format_param(it.a) << ',' << format_param(it.b) << ','
            << format_param(it.c) << ',' << format_param(it.d) << ','
            << format_param(it.r) << '\n';
    }
    if (!out) throw ParseError("failed writing bank file: " + path.string());
}

}  // namespace catforge
