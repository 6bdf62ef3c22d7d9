#include "catforge/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "catforge/errors.hpp"

namespace catforge {

GaussLegendre::GaussLegendre(std::size_t order) {
    if (order == 0) throw DomainError("quadrature order must be >= 1");
    nodes_.resize(order);
    weights_.resize(order);

    const std::size_t n = order;
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Chebyshev-based starting guess for the i-th positive root.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P'_n(x) by the three-term recurrence.
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 -
                                   (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;  // exact middle node
}

}  // namespace catforge
