#include "catforge/irt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace catforge::irt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double icc(Theta theta, const Item& item) {
    item.check();
    return item.c + (item.d - item.c) / (1.0 + std::exp(-item.a * (theta - item.b)));
}

double inf(Theta theta, const Item& item) {
    const double p = icc(theta, item);
    if (p <= 0.0 || p >= 1.0) return 0.0;  // limit at degenerate endpoints
    const double num = item.a * item.a * (p - item.c) * (p - item.c) *
                       (item.d - p) * (item.d - p);
    const double den = (item.d - item.c) * (item.d - item.c) * (1.0 - p) * p;
    return num / den;
}

Theta max_info(const Item& item) {
    item.check();
    const double c = item.c;
    const double d = item.d;
    // Stationary points of the information satisfy
    //   2x^3 - 3x^2 + (c + d - 2cd) x + cd = 0   with x = P(theta).
    // Depressing with x = t + 1/2 gives t^3 + u t - v = 0. u is always in
    // [-3/4, -1/4] for valid items, so the trigonometric method applies,
    // and the interior root (the only one inside (c, d)) is the middle of
    // the three, reached with phase 4*pi/3.
    const double u = -0.75 + (c + d - 2.0 * c * d) / 2.0;
    const double v = -(c + d - 1.0) / 4.0;
    const double w = std::clamp((v / 2.0) * std::sqrt(27.0 / (-u * u * u)),
                                -1.0, 1.0);
    double x = 2.0 * std::sqrt(-u / 3.0) *
                   std::cos(std::acos(w) / 3.0 + 4.0 * std::numbers::pi / 3.0) +
               0.5;
    // Rounding guard: the root is interior analytically; keep it there.
    const double margin = 1e-12 * (d - c);
    x = std::clamp(x, c + margin, d - margin);
    return item.b + (1.0 / item.a) * std::log((x - c) / (d - x));
}

double test_info(Theta theta, std::span<const Item> items) {
    if (items.empty()) throw DomainError("test_info requires at least one item");
    double total = 0.0;
    for (const Item& item : items) total += inf(theta, item);
    return total;
}

double see(Theta theta, std::span<const Item> items) {
    const double info = test_info(theta, items);
    if (info <= 0.0) return kInf;
    return std::sqrt(1.0 / info);
}

double variance(Theta theta, std::span<const Item> items) {
    const double s = see(theta, items);
    return s * s;
}

double reliability(Theta theta, std::span<const Item> items) {
    const double info = test_info(theta, items);
    if (info <= 0.0) return -kInf;
    return 1.0 - 1.0 / info;
}

double log_likelihood(Theta theta, const std::vector<bool>& responses,
                      std::span<const Item> items) {
    if (responses.size() != items.size()) {
        throw ShapeError("log_likelihood: responses and items lengths differ");
    }
    if (items.empty()) {
        throw DomainError("log_likelihood requires at least one item");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double p = std::clamp(icc(theta, items[i]), kProbClamp, 1.0 - kProbClamp);
        total += responses[i] ? std::log(p) : std::log(1.0 - p);
    }
    return total;
}

std::vector<double> icc_batch(Theta theta, std::span<const Item> items) {
    std::vector<double> out;
    out.reserve(items.size());
    for (const Item& item : items) out.push_back(icc(theta, item));
    return out;
}

std::vector<double> inf_batch(Theta theta, std::span<const Item> items) {
    std::vector<double> out;
    out.reserve(items.size());
    for (const Item& item : items) out.push_back(inf(theta, item));
    return out;
}

std::vector<Theta> max_info_batch(std::span<const Item> items) {
    std::vector<Theta> out;
    out.reserve(items.size());
    for (const Item& item : items) out.push_back(max_info(item));
    return out;
}

}  // namespace catforge::irt
