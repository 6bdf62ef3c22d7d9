#include "catforge/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "catforge/errors.hpp"
#include "catforge/rng.hpp"

namespace catforge {

namespace {

double sq_dist(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        acc += diff * diff;
    }
    return acc;
}

KMeansResult run_once(const std::vector<std::vector<double>>& points, std::size_t k,
                      std::uint64_t seed, std::size_t max_iterations) {
    const std::size_t n = points.size();
    Rng rng(seed);

    // k-means++ seeding.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.uniform_index(n)]);
    std::vector<double> dist2(n, std::numeric_limits<double>::max());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], sq_dist(points[i], centroids.back()));
            total += dist2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double running = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                running += dist2[i];
                if (running >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.uniform_index(n);  // all remaining points coincide
        }
        centroids.push_back(points[pick]);
    }

    KMeansResult result;
    result.assignment.assign(n, 0);
    std::size_t iter = 0;
    for (; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = sq_dist(points[i], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = sq_dist(points[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignment[i] != best) {
                result.assignment[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        const std::size_t dim = points[0].size();
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = result.assignment[i];
            ++counts[c];
            for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Refill with the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = sq_dist(points[i], centroids[result.assignment[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids[c] = points[far];
                result.assignment[far] = c;
            } else {
                for (std::size_t j = 0; j < dim; ++j) {
                    centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
                }
            }
        }
    }

    result.centroids = std::move(centroids);
    result.iterations = iter;
    result.sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        result.sse += sq_dist(points[i], result.centroids[result.assignment[i]]);
    }
    return result;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed, std::size_t restarts,
                    std::size_t max_iterations) {
    if (points.empty()) throw DomainError("kmeans requires at least one point");
    if (k < 1) throw DomainError("kmeans requires k >= 1");
    if (k > points.size()) {
        throw DomainError("kmeans requires k <= number of points");
    }
    if (restarts < 1) throw DomainError("kmeans requires at least one restart");
    const std::size_t dim = points[0].size();
    for (const auto& p : points) {
        if (p.size() != dim) throw ShapeError("kmeans points must share one dimension");
    }

    KMeansResult best;
    bool have_best = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        KMeansResult candidate =
            run_once(points, k, derive_seed(seed, r), max_iterations);
        if (!have_best || candidate.sse < best.sse) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    return best;
}

}  // namespace catforge
