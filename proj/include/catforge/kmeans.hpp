#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace catforge {

struct KMeansResult {
    std::vector<std::size_t> assignment;        // point index -> cluster id
    std::vector<std::vector<double>> centroids; // k rows
    double sse = 0.0;
    std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding. Runs `restarts` independent
/// seeded attempts and keeps the lowest-SSE solution, so results are
/// deterministic per seed. Empty clusters are refilled with the point
/// farthest from its centroid.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed, std::size_t restarts = 10,
                    std::size_t max_iterations = 100);

}  // namespace catforge
