#pragma once

#include <cstddef>
#include <vector>

namespace catforge {

/// Fixed-order Gauss-Legendre rule. Nodes and weights are computed once by
/// Newton iteration on the Legendre recurrence, accurate to ~1e-15.
class GaussLegendre {
public:
    explicit GaussLegendre(std::size_t order);

    template <class F>
    double integrate(F&& f, double lo, double hi) const {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            acc += weights_[i] * f(mid + half * nodes_[i]);
        }
        return acc * half;
    }

    std::size_t order() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> nodes_;    // on [-1, 1], ascending
    std::vector<double> weights_;
};

}  // namespace catforge
