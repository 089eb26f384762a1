#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lemlearn/embedding.hpp"

namespace lemlearn {

struct ClusteringResult {
    int k = 0;
    std::vector<int> assignments;           // one per input point, in [0, k)
    std::vector<EmbeddingVector> centroids; // k centroids
    double inertia = 0.0;                   // sum of squared distances
    std::vector<double> inertia_trace;      // per Lloyd iteration, non-increasing
};

/// Lloyd's algorithm with k-means++ style seeding. Deterministic for a fixed
/// seed; at most 100 iterations or until the assignment fixpoint.
ClusteringResult kmeans(const std::vector<EmbeddingVector>& points, int k, uint64_t seed);

/// Sweeps k in [1, k_max] and returns the k whose (k, inertia) point lies
/// farthest from the chord joining the sweep endpoints.
int choose_k_elbow(const std::vector<EmbeddingVector>& points, int k_max, uint64_t seed);

/// Embeds annotation texts, picks k with the elbow sweep
/// (k_max = min(10, ceil(n/3), n)) and returns the id partition.
std::vector<std::vector<std::string>> cluster_annotations(
    const std::vector<std::pair<std::string, std::string>>& annotations,
    EmbeddingProvider& provider, uint64_t seed);

}  // namespace lemlearn
