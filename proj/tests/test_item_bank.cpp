#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "catforge/item_bank.hpp"
#include "catforge/rng.hpp"

using namespace catforge;
using doctest::Approx;

namespace {

std::filesystem::path temp_csv(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("generation produces valid banks for every model") {
    for (const char* model : {"1PL", "2PL", "3PL", "4PL"}) {
        const ItemBank bank =
            generate_item_bank({5, model_from_string(model), 0.0, 99});
        CHECK(bank.size() == 5);
        CHECK(bank.validate().ok());
        for (const Item& item : bank.items()) CHECK(item.r == 0.0);
    }
}

TEST_CASE("lower models pin the reduced parameters") {
    const ItemBank one = generate_item_bank({20, Model::OnePL, 0.0, 5});
    for (const Item& item : one.items()) {
        CHECK(item.a == 1.0);
        CHECK(item.c == 0.0);
        CHECK(item.d == 1.0);
    }
    const ItemBank two = generate_item_bank({20, Model::TwoPL, 0.0, 5});
    for (const Item& item : two.items()) {
        CHECK(item.c == 0.0);
        CHECK(item.d == 1.0);
    }
    const ItemBank three = generate_item_bank({20, Model::ThreePL, 0.0, 5});
    for (const Item& item : three.items()) CHECK(item.d == 1.0);
}

TEST_CASE("generation is deterministic per seed") {
    const BankGenSpec spec{50, Model::FourPL, 0.3, 1234};
    const ItemBank a = generate_item_bank(spec);
    const ItemBank b = generate_item_bank(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.item(i) == b.item(i));
    }
    const ItemBank c = generate_item_bank({50, Model::FourPL, 0.3, 1235});
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical = identical && a.item(i) == c.item(i);
    }
    CHECK_FALSE(identical);
}

TEST_CASE("generated parameter moments match the sampling distributions") {
    const ItemBank bank = generate_item_bank({10000, Model::ThreePL, 0.0, 2024});
    double mean_a = 0.0, m2_a = 0.0, mean_b = 0.0, mean_c = 0.0;
    for (const Item& item : bank.items()) {
        mean_a += item.a;
        mean_b += item.b;
        mean_c += item.c;
    }
    mean_a /= 10000.0;
    mean_b /= 10000.0;
    mean_c /= 10000.0;
    for (const Item& item : bank.items()) m2_a += (item.a - mean_a) * (item.a - mean_a);
    const double sd_a = std::sqrt(m2_a / 10000.0);

    CHECK(mean_a == Approx(1.2).scale(1.0).epsilon(0.02));
    CHECK(sd_a == Approx(0.25).scale(1.0).epsilon(0.02));
    CHECK(mean_b == Approx(0.0).scale(1.0).epsilon(0.03));
    CHECK(mean_c == Approx(0.25).scale(1.0).epsilon(0.002));
}

TEST_CASE("uniform upper asymptote support") {
    const ItemBank bank = generate_item_bank({10000, Model::FourPL, 0.0, 31});
    double lo = 1.0, hi = 0.0;
    for (const Item& item : bank.items()) {
        lo = std::min(lo, item.d);
        hi = std::max(hi, item.d);
    }
    CHECK(lo >= 0.94);
    CHECK(hi < 1.0);
    CHECK(lo == Approx(0.94).scale(1.0).epsilon(0.001));
    CHECK(hi == Approx(1.0).scale(1.0).epsilon(0.001));
}

TEST_CASE("requested a-b correlation is realized") {
    const ItemBank bank = generate_item_bank({10000, Model::FourPL, 0.5, 7});
    std::vector<double> a_values, b_values;
    for (const Item& item : bank.items()) {
        a_values.push_back(item.a);
        b_values.push_back(item.b);
    }
    const double r = pearson(a_values, b_values);
    CHECK(r >= 0.45);
    CHECK(r <= 0.55);

    const ItemBank uncorrelated = generate_item_bank({10000, Model::FourPL, 0.0, 7});
    a_values.clear();
    b_values.clear();
    for (const Item& item : uncorrelated.items()) {
        a_values.push_back(item.a);
        b_values.push_back(item.b);
    }
    CHECK(std::abs(pearson(a_values, b_values)) < 0.05);
}

TEST_CASE("truncation guarantee over a large sample") {
    const ItemBank bank = generate_item_bank({100000, Model::FourPL, 0.5, 404});
    for (const Item& item : bank.items()) {
        CHECK(item.a > 0.0);
        CHECK(item.c >= 0.0);
        CHECK(item.c < item.d);
        CHECK(item.d <= 1.0);
    }
}

TEST_CASE("generation rejects bad specs") {
    CHECK_THROWS_AS(generate_item_bank({0, Model::FourPL, 0.0, 1}), DomainError);
    CHECK_THROWS_AS(generate_item_bank({5, Model::FourPL, 1.5, 1}), DomainError);
}

TEST_CASE("normalization fills missing columns") {
    const ItemBank rasch = normalize_item_bank({{0.7}});
    CHECK(rasch.item(0) == Item{1.0, 0.7, 0.0, 1.0, 0.0});
    CHECK(rasch.model() == Model::OnePL);

    const ItemBank two = normalize_item_bank({{1.3, -0.2}});
    CHECK(two.item(0) == Item{1.3, -0.2, 0.0, 1.0, 0.0});
    CHECK(two.model() == Model::TwoPL);

    const ItemBank three = normalize_item_bank({{1.3, -0.2, 0.1}});
    CHECK(three.item(0) == Item{1.3, -0.2, 0.1, 1.0, 0.0});

    const ItemBank four = normalize_item_bank({{1.3, -0.2, 0.1, 0.97}});
    CHECK(four.item(0) == Item{1.3, -0.2, 0.1, 0.97, 0.0});
}

TEST_CASE("normalization is idempotent") {
    const ItemBank once = normalize_item_bank({{1.3, -0.2, 0.1, 0.97}, {0.8, 1.1, 0.2, 0.95}});
    std::vector<std::vector<double>> rows;
    for (const Item& item : once.items()) {
        rows.push_back({item.a, item.b, item.c, item.d});
    }
    const ItemBank twice = normalize_item_bank(rows);
    REQUIRE(twice.size() == once.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once.item(i) == twice.item(i));
    }
}

TEST_CASE("normalization reports the offending row and parameter") {
    CHECK_THROWS_WITH_AS(normalize_item_bank({{1.0, 0.0}, {-2.0, 0.0}}),
                         doctest::Contains("item 1"), ValidationError);
    CHECK_THROWS_WITH_AS(normalize_item_bank({{1.0, 0.0, 1.2}}),
                         doctest::Contains("parameter c"), ValidationError);
    CHECK_THROWS_AS(normalize_item_bank({{1.0, 0.0}, {1.0}}), ShapeError);
    CHECK_THROWS_AS(normalize_item_bank({}), DomainError);
    CHECK_THROWS_AS(normalize_item_bank({{1.0, 0.0, 0.1, 0.9, 0.0}}), DomainError);
}

TEST_CASE("validation reports every violation with its row") {
    std::vector<Item> items = {{1.0, 0.0, 0.0, 1.0},
                               {1.0, 0.0, 0.0, 1.0},
                               {1.0, 0.0, 0.0, 1.0},
                               {-1.0, 0.0, 0.0, 1.0}};
    const ItemBank bad(items, Model::TwoPL);
    const ValidationReport report = bad.validate();
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.size() == 1);
    CHECK(report.violations[0].row == 3);
    CHECK(report.violations[0].parameter == "a");

    items[1].c = 1.2;  // violates c < d and the model's c = 0
    const ItemBank worse(items, Model::TwoPL);
    const ValidationReport report2 = worse.validate();
    bool cited_c = false;
    for (const Violation& v : report2.violations) {
        cited_c = cited_c || (v.row == 1 && v.parameter == "c");
    }
    CHECK(cited_c);

    const ItemBank good(std::vector<Item>{{1.2, 0.3, 0.1, 0.98}}, Model::FourPL);
    CHECK(good.validate().ok());
    CHECK(good.validate().to_string() == "bank is valid");
}

TEST_CASE("model consistency is part of validation") {
    const ItemBank bank(std::vector<Item>{{1.5, 0.0, 0.0, 1.0}}, Model::OnePL);
    const ValidationReport report = bank.validate();
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].parameter == "a");
}

TEST_CASE("exposure bookkeeping") {
    const ItemBank bank(std::vector<Item>(4, Item{1.0, 0.0, 0.0, 1.0}), Model::TwoPL);

    // Item 0 in both of two tests.
    std::vector<std::vector<std::size_t>> tests = {{0, 1}, {0, 2}};
    const ItemBank after = bank.update_exposure(tests);
    CHECK(after.administration_count() == 2);
    CHECK(after.item(0).r == 1.0);
    CHECK(after.item(1).r == 0.5);
    CHECK(after.item(3).r == 0.0);

    // Cumulative: 3 uses out of 10 tests in total.
    std::vector<std::vector<std::size_t>> more(8, std::vector<std::size_t>{3});
    more[0] = {0};
    const ItemBank later = after.update_exposure(more);
    CHECK(later.administration_count() == 10);
    CHECK(later.item(0).r == Approx(0.3).epsilon(1e-15));

    // The original bank never mutates.
    CHECK(bank.administration_count() == 0);
    CHECK(bank.item(0).r == 0.0);

    CHECK_THROWS_AS(bank.update_exposure(std::vector<std::vector<std::size_t>>{{9}}),
                    DomainError);
}

TEST_CASE("usage counts reconcile with test lengths") {
    Rng rng(12);
    const ItemBank bank(std::vector<Item>(20, Item{1.0, 0.0, 0.0, 1.0}), Model::TwoPL);
    std::vector<std::vector<std::size_t>> tests;
    std::size_t total_length = 0;
    for (int t = 0; t < 30; ++t) {
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < bank.size(); ++i) {
            if (rng.bernoulli(0.4)) test.push_back(i);
        }
        total_length += test.size();
        tests.push_back(std::move(test));
    }
    const ItemBank after = bank.update_exposure(tests);
    std::uint64_t total_usage = 0;
    for (std::size_t i = 0; i < after.size(); ++i) {
        total_usage += after.usage_count(i);
        CHECK(after.item(i).r >= 0.0);
        CHECK(after.item(i).r <= 1.0);
    }
    CHECK(total_usage == total_length);
}

TEST_CASE("csv round trip is bit-exact") {
    const ItemBank bank = generate_item_bank({25, Model::FourPL, 0.25, 555});
    const auto path = temp_csv("catforge_bank_roundtrip.csv");
    save_bank_csv(bank, path);
    const ItemBank loaded = load_bank_csv(path);
    REQUIRE(loaded.size() == bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        CHECK(loaded.item(i) == bank.item(i));
    }
    CHECK(loaded.model() == Model::FourPL);
    std::filesystem::remove(path);
}

TEST_CASE("csv loading rejects malformed input") {
    const auto path = temp_csv("catforge_bank_bad.csv");

    {
        std::ofstream out(path);
    }
    CHECK_THROWS_WITH_AS(load_bank_csv(path), doctest::Contains("empty"), ParseError);

    {
        std::ofstream out(path);
        out << "a,b,c,d,r\n";
    }
    CHECK_THROWS_WITH_AS(load_bank_csv(path), doctest::Contains("no items"), ParseError);

    {
        std::ofstream out(path);
        out << "a,b,c,d,r\n1.0,0.0,0.0\n";  // missing columns
    }
    CHECK_THROWS_WITH_AS(load_bank_csv(path), doctest::Contains("line 2"), ParseError);

    {
        std::ofstream out(path);
        out << "a,b,c,d\n1.0,0.0,0.0,1.0\n";  // wrong header
    }
    CHECK_THROWS_WITH_AS(load_bank_csv(path), doctest::Contains("header"), ParseError);

    {
        std::ofstream out(path);
        out << "a,b,c,d,r\n1.0,zero,0.0,1.0,0\n";
    }
    CHECK_THROWS_WITH_AS(load_bank_csv(path), doctest::Contains("zero"), ParseError);

    CHECK_THROWS_AS(load_bank_csv(temp_csv("does_not_exist_catforge.csv")), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("loaded banks infer the tightest model") {
    const auto path = temp_csv("catforge_bank_model.csv");
    {
        std::ofstream out(path);
        out << "a,b,c,d,r\n1,0.5,0,1,0\n1,-0.5,0,1,0\n";
    }
    CHECK(load_bank_csv(path).model() == Model::OnePL);
    {
        std::ofstream out(path);
        out << "a,b,c,d,r\n1.2,0.5,0.1,1,0\n";
    }
    CHECK(load_bank_csv(path).model() == Model::ThreePL);
    std::filesystem::remove(path);
}
