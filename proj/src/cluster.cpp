#include "lemlearn/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "lemlearn/errors.hpp"
#include "lemlearn/rng.hpp"

namespace lemlearn {

namespace {

double sq_dist(const EmbeddingVector& a, const EmbeddingVector& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double diff = a.values[i] - b.values[i];
        d += diff * diff;
    }
    return d;
}

// k-means++ seeding: first centroid uniform, later ones weighted by squared
// distance to the nearest chosen centroid.
std::vector<EmbeddingVector> seed_centroids(const std::vector<EmbeddingVector>& points, int k,
                                            Rng& rng) {
    std::vector<EmbeddingVector> centroids;
    centroids.reserve(static_cast<size_t>(k));
    centroids.push_back(points[rng.below(points.size())]);
    std::vector<double> d2(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        size_t chosen = 0;
        if (total <= 0.0) {
            chosen = rng.below(points.size());
        } else {
            double target = rng.next_double() * total;
            double acc = 0.0;
            for (size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
                chosen = i;
            }
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

}  // namespace

ClusteringResult kmeans(const std::vector<EmbeddingVector>& points, int k, uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (k < 1 || k > n) throw InvalidK("kmeans: k=" + std::to_string(k) + " for n=" + std::to_string(n));
    const size_t dim = points.front().values.size();
    for (const auto& p : points)
        if (p.values.size() != dim) throw DimensionMismatch("kmeans: ragged points");

    Rng rng(seed);
    ClusteringResult result;
    result.k = k;
    result.centroids = seed_centroids(points, k, rng);
    result.assignments.assign(static_cast<size_t>(n), -1);

    constexpr int kMaxIterations = 100;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // assignment step
        std::vector<int> next(static_cast<size_t>(n));
        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                double d = sq_dist(points[static_cast<size_t>(i)],
                                   result.centroids[static_cast<size_t>(c)]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            next[static_cast<size_t>(i)] = best_c;
            inertia += best;
        }
#ifndef NDEBUG
        assert(result.inertia_trace.empty() || inertia <= result.inertia_trace.back() + 1e-9);
#endif
        result.inertia_trace.push_back(inertia);
        result.inertia = inertia;
        if (next == result.assignments) break;
        result.assignments = std::move(next);

        // update step
        std::vector<std::vector<double>> sums(static_cast<size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            int c = result.assignments[static_cast<size_t>(i)];
            ++counts[static_cast<size_t>(c)];
            for (size_t d = 0; d < dim; ++d)
                sums[static_cast<size_t>(c)][d] += points[static_cast<size_t>(i)].values[d];
        }
        std::vector<bool> stolen(static_cast<size_t>(n), false);
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) {
                for (size_t d = 0; d < dim; ++d)
                    result.centroids[static_cast<size_t>(c)].values[d] =
                        sums[static_cast<size_t>(c)][d] / counts[static_cast<size_t>(c)];
            } else {
                // empty cluster: reseed to the point farthest from its centroid
                double far_d = -1.0;
                int far_i = 0;
                for (int i = 0; i < n; ++i) {
                    if (stolen[static_cast<size_t>(i)]) continue;
                    int a = result.assignments[static_cast<size_t>(i)];
                    double d = sq_dist(points[static_cast<size_t>(i)],
                                       result.centroids[static_cast<size_t>(a)]);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                stolen[static_cast<size_t>(far_i)] = true;
                result.centroids[static_cast<size_t>(c)] = points[static_cast<size_t>(far_i)];
            }
        }
    }
    return result;
}

int choose_k_elbow(const std::vector<EmbeddingVector>& points, int k_max, uint64_t seed) {
    const int n = static_cast<int>(points.size());
    if (k_max < 1 || k_max > n)
        throw InvalidK("choose_k_elbow: k_max=" + std::to_string(k_max) +
                       " for n=" + std::to_string(n));
    if (k_max == 1) return 1;

    std::vector<double> inertia(static_cast<size_t>(k_max) + 1, 0.0);
    for (int k = 1; k <= k_max; ++k)
        inertia[static_cast<size_t>(k)] = kmeans(points, k, seed).inertia;

    // A perfect clustering ends the sweep: smaller k cannot be beaten once
    // the inertia hits zero, and the chord rule is degenerate there.
    for (int k = 1; k <= k_max; ++k)
        if (inertia[static_cast<size_t>(k)] <= 1e-12 * std::max(inertia[1], 1.0)) return k;

    // knee = point farthest from the chord (1, I_1) -- (k_max, I_kmax)
    const double x1 = 1.0, y1 = inertia[1];
    const double x2 = static_cast<double>(k_max), y2 = inertia[static_cast<size_t>(k_max)];
    const double chord_len = std::hypot(x2 - x1, y2 - y1);
    int best_k = 1;
    double best_dist = -1.0;
    for (int k = 1; k <= k_max; ++k) {
        double dist;
        if (chord_len == 0.0) {
            dist = 0.0;
        } else {
            dist = std::abs((x2 - x1) * (y1 - inertia[static_cast<size_t>(k)]) -
                            (x1 - static_cast<double>(k)) * (y2 - y1)) /
                   chord_len;
        }
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            best_k = k;
        }
    }
    return best_k;
}

std::vector<std::vector<std::string>> cluster_annotations(
    const std::vector<std::pair<std::string, std::string>>& annotations,
    EmbeddingProvider& provider, uint64_t seed) {
    std::vector<std::string> texts;
    texts.reserve(annotations.size());
    for (const auto& [id, text] : annotations) texts.push_back(text);
    auto points = embed(texts, provider);

    const int n = static_cast<int>(points.size());
    if (n == 1) return {{annotations.front().first}};

    const int k_max = std::min({10, (n + 2) / 3, n});
    const int k = (k_max < 2) ? 1 : choose_k_elbow(points, k_max, seed);
    auto clustering = kmeans(points, k, seed);

    std::vector<std::vector<std::string>> groups(static_cast<size_t>(k));
    for (size_t i = 0; i < annotations.size(); ++i)
        groups[static_cast<size_t>(clustering.assignments[i])].push_back(annotations[i].first);
    std::vector<std::vector<std::string>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    return out;
}

}  // namespace lemlearn
