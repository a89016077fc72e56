/**
 * Copyright 2026 The bosonvalid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bosonvalid/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "bosonvalid/errors.hpp"
#include "bosonvalid/rng.hpp"

namespace bosonvalid {

void ClusteringConfig::validate() const {
    if (algorithm == Algorithm::KMeans && k < 3) {
        throw InvalidParameterError("cluster count must be at least 3 (the test needs nu >= 2)");
    }
    if (min_cluster_size < 5) {
        throw InvalidParameterError("minimum cluster size must be at least 5");
    }
    if (algorithm == Algorithm::Bubble && bubble_radius <= 0.0) {
        throw InvalidParameterError("bubble radius must be positive");
    }
    if (outlier_fraction < 0.0 || outlier_fraction >= 1.0) {
        throw InvalidParameterError("outlier fraction must lie in [0, 1)");
    }
    if (max_iterations < 1) {
        throw InvalidParameterError("max iterations must be at least 1");
    }
    if (voting_trials < 1 || voting_trials % 2 == 0) {
        throw InvalidParameterError("voting trials must be odd and positive");
    }
}

std::string to_string(ClusteringConfig::Algorithm algorithm) {
    switch (algorithm) {
    case ClusteringConfig::Algorithm::Bubble:
        return "bubble";
    case ClusteringConfig::Algorithm::Hierarchical:
        return "hierarchical";
    case ClusteringConfig::Algorithm::KMeans:
        return "kmeans";
    }
    return "kmeans";
}

ClusteringConfig::Algorithm algorithm_from_string(std::string_view text) {
    if (text == "bubble") {
        return ClusteringConfig::Algorithm::Bubble;
    }
    if (text == "hierarchical") {
        return ClusteringConfig::Algorithm::Hierarchical;
    }
    if (text == "kmeans" || text == "k-means") {
        return ClusteringConfig::Algorithm::KMeans;
    }
    throw InvalidParameterError("unknown clustering algorithm \"" + std::string(text) + "\"");
}

std::string to_string(ClusteringConfig::Init init) {
    switch (init) {
    case ClusteringConfig::Init::UniformRandom:
        return "uniform";
    case ClusteringConfig::Init::KMeansPlusPlus:
        return "kmeans++";
    case ClusteringConfig::Init::Hierarchical:
        return "hierarchical";
    }
    return "kmeans++";
}

ClusteringConfig::Init init_from_string(std::string_view text) {
    if (text == "uniform" || text == "random") {
        return ClusteringConfig::Init::UniformRandom;
    }
    if (text == "kmeans++" || text == "k-means++" || text == "plusplus") {
        return ClusteringConfig::Init::KMeansPlusPlus;
    }
    if (text == "hierarchical") {
        return ClusteringConfig::Init::Hierarchical;
    }
    throw InvalidParameterError("unknown init strategy \"" + std::string(text) + "\"");
}

namespace {

// Observed states deduplicated and ordered by enumeration order, with
// multiplicities. All learners weight states by multiplicity.
struct DistinctEvents {
    std::vector<std::vector<double>> points;
    std::vector<long> multiplicities;
    std::vector<std::size_t> event_to_distinct;
    long total_events = 0;
    int modes = 0;
};

DistinctEvents dedupe(const EventSample &sample) {
    if (sample.events.empty()) {
        throw InvalidParameterError("cannot cluster an empty sample");
    }
    sample.validate();
    std::map<std::vector<int>, std::size_t> order;
    for (const ModeOccupation &event : sample.events) {
        order.emplace(event.occupied_modes(), 0);
    }
    std::size_t next = 0;
    for (auto &entry : order) {
        entry.second = next++;
    }
    DistinctEvents distinct;
    distinct.modes = sample.modes();
    distinct.points.resize(order.size());
    distinct.multiplicities.assign(order.size(), 0);
    distinct.event_to_distinct.reserve(sample.events.size());
    for (const ModeOccupation &event : sample.events) {
        const std::size_t id = order.at(event.occupied_modes());
        if (distinct.points[id].empty()) {
            distinct.points[id].assign(event.occupations().begin(), event.occupations().end());
        }
        ++distinct.multiplicities[id];
        distinct.event_to_distinct.push_back(id);
        ++distinct.total_events;
    }
    return distinct;
}

std::vector<int> assignments_from_distinct(const DistinctEvents &distinct,
                                           std::span<const int> distinct_assignment) {
    std::vector<int> assignments;
    assignments.reserve(distinct.event_to_distinct.size());
    for (std::size_t id : distinct.event_to_distinct) {
        assignments.push_back(distinct_assignment[id]);
    }
    return assignments;
}

std::vector<long> counts_from_distinct(const DistinctEvents &distinct,
                                       std::span<const int> distinct_assignment,
                                       int cluster_count) {
    std::vector<long> counts(static_cast<std::size_t>(cluster_count), 0);
    for (std::size_t id = 0; id < distinct.points.size(); ++id) {
        const int cluster = distinct_assignment[id];
        if (cluster >= 0) {
            counts[static_cast<std::size_t>(cluster)] += distinct.multiplicities[id];
        }
    }
    return counts;
}

} // namespace

int nearest_centroid(std::span<const std::vector<double>> centroids,
                     std::span<const double> point, Metric metric) {
    if (centroids.empty()) {
        throw CoverageError("structure has no centroids");
    }
    int best = 0;
    double best_distance = distance(centroids[0], point, metric);
    for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
        const double d = distance(centroids[static_cast<std::size_t>(c)], point, metric);
        if (d < best_distance) {
            best_distance = d;
            best = c;
        }
    }
    return best;
}

ClusterStructure bubble_cluster(const EventSample &sample, double radius, Metric metric) {
    if (radius <= 0.0) {
        throw InvalidParameterError("bubble radius must be positive");
    }
    const DistinctEvents distinct = dedupe(sample);
    const std::size_t n = distinct.points.size();

    // States by decreasing frequency; stable sort keeps enumeration order
    // as the tie-break.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return distinct.multiplicities[a] > distinct.multiplicities[b];
    });

    std::vector<int> distinct_assignment(n, -1);
    std::vector<std::vector<double>> centroids;
    for (std::size_t pick : order) {
        if (distinct_assignment[pick] >= 0) {
            continue;
        }
        const int cluster = static_cast<int>(centroids.size());
        centroids.push_back(distinct.points[pick]);
        for (std::size_t candidate : order) {
            if (distinct_assignment[candidate] >= 0) {
                continue;
            }
            if (distance(distinct.points[pick], distinct.points[candidate], metric) < radius) {
                distinct_assignment[candidate] = cluster;
            }
        }
    }

    ClusterStructure structure;
    structure.centroids = std::move(centroids);
    structure.metric = metric;
    structure.assignments = assignments_from_distinct(distinct, distinct_assignment);
    structure.counts = counts_from_distinct(distinct, distinct_assignment,
                                            static_cast<int>(structure.centroids.size()));
    structure.algorithm = "bubble";
    structure.parameters = "radius=" + std::to_string(radius);
    return structure;
}

namespace {

struct AgglomerativeCluster {
    std::vector<double> centroid;
    long weight = 0;
    std::vector<std::size_t> members; // distinct-state indices
    bool active = true;
    // cached nearest active neighbour
    int neighbour = -1;
    double neighbour_distance = std::numeric_limits<double>::infinity();
};

void refresh_neighbour(std::vector<AgglomerativeCluster> &clusters, int index, Metric metric) {
    AgglomerativeCluster &cluster = clusters[static_cast<std::size_t>(index)];
    cluster.neighbour = -1;
    cluster.neighbour_distance = std::numeric_limits<double>::infinity();
    for (int other = 0; other < static_cast<int>(clusters.size()); ++other) {
        if (other == index || !clusters[static_cast<std::size_t>(other)].active) {
            continue;
        }
        const double d = distance(cluster.centroid,
                                  clusters[static_cast<std::size_t>(other)].centroid, metric);
        if (d < cluster.neighbour_distance ||
            (d == cluster.neighbour_distance && other < cluster.neighbour)) {
            cluster.neighbour_distance = d;
            cluster.neighbour = other;
        }
    }
}

// Events in clusters below min_size, as a fraction of all events.
double small_cluster_fraction(const std::vector<AgglomerativeCluster> &clusters, int min_size,
                              long total_events) {
    long small = 0;
    for (const AgglomerativeCluster &cluster : clusters) {
        if (cluster.active && cluster.weight < min_size) {
            small += cluster.weight;
        }
    }
    return static_cast<double>(small) / static_cast<double>(total_events);
}

} // namespace

ClusterStructure hierarchical_cluster(const EventSample &sample, double outlier_fraction,
                                      int min_size, Metric metric) {
    if (outlier_fraction < 0.0 || outlier_fraction >= 1.0) {
        throw InvalidParameterError("outlier fraction must lie in [0, 1)");
    }
    if (min_size < 1) {
        throw InvalidParameterError("minimum cluster size must be positive");
    }
    const DistinctEvents distinct = dedupe(sample);
    const std::size_t n = distinct.points.size();

    std::vector<AgglomerativeCluster> clusters(n);
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i].centroid = distinct.points[i];
        clusters[i].weight = distinct.multiplicities[i];
        clusters[i].members = {i};
    }
    int active = static_cast<int>(n);
    for (int i = 0; i < active; ++i) {
        if (n > 1) {
            refresh_neighbour(clusters, i, metric);
        }
    }

    while (small_cluster_fraction(clusters, min_size, distinct.total_events) > outlier_fraction) {
        if (active <= 3) {
            throw HaltingError(
                "agglomeration would need fewer than 3 clusters to satisfy the outlier "
                "fraction " +
                std::to_string(outlier_fraction) + "; refusing to continue");
        }
        // Closest active pair via the cached neighbours.
        int best = -1;
        for (int i = 0; i < static_cast<int>(clusters.size()); ++i) {
            const AgglomerativeCluster &cluster = clusters[static_cast<std::size_t>(i)];
            if (!cluster.active) {
                continue;
            }
            if (best < 0 ||
                cluster.neighbour_distance <
                    clusters[static_cast<std::size_t>(best)].neighbour_distance) {
                best = i;
            }
        }
        const int a = std::min(best, clusters[static_cast<std::size_t>(best)].neighbour);
        const int b = std::max(best, clusters[static_cast<std::size_t>(best)].neighbour);
        AgglomerativeCluster &into = clusters[static_cast<std::size_t>(a)];
        AgglomerativeCluster &from = clusters[static_cast<std::size_t>(b)];
        const double new_weight = static_cast<double>(into.weight + from.weight);
        for (std::size_t d = 0; d < into.centroid.size(); ++d) {
            into.centroid[d] = (into.centroid[d] * static_cast<double>(into.weight) +
                                from.centroid[d] * static_cast<double>(from.weight)) /
                               new_weight;
        }
        into.weight += from.weight;
        into.members.insert(into.members.end(), from.members.begin(), from.members.end());
        from.active = false;
        from.members.clear();
        --active;

        refresh_neighbour(clusters, a, metric);
        for (int i = 0; i < static_cast<int>(clusters.size()); ++i) {
            AgglomerativeCluster &cluster = clusters[static_cast<std::size_t>(i)];
            if (!cluster.active || i == a) {
                continue;
            }
            if (cluster.neighbour == b || cluster.neighbour == a) {
                refresh_neighbour(clusters, i, metric);
            } else {
                // The merged centroid may have moved closer than the cache.
                const double d = distance(cluster.centroid, into.centroid, metric);
                if (d < cluster.neighbour_distance) {
                    cluster.neighbour_distance = d;
                    cluster.neighbour = a;
                }
            }
        }
    }

    // Retained clusters keep their discovery order; small ones become the
    // outlier set and are dropped from the structure.
    std::vector<int> distinct_assignment(n, -1);
    ClusterStructure structure;
    structure.metric = metric;
    structure.algorithm = "hierarchical";
    structure.parameters = "outlier_fraction=" + std::to_string(outlier_fraction) +
                           ",min_size=" + std::to_string(min_size);
    for (const AgglomerativeCluster &cluster : clusters) {
        if (!cluster.active) {
            continue;
        }
        if (cluster.weight < min_size) {
            structure.outlier_events += cluster.weight;
            continue;
        }
        const int id = static_cast<int>(structure.centroids.size());
        structure.centroids.push_back(cluster.centroid);
        structure.counts.push_back(cluster.weight);
        for (std::size_t member : cluster.members) {
            distinct_assignment[member] = id;
        }
    }
    structure.assignments = assignments_from_distinct(distinct, distinct_assignment);
    return structure;
}

namespace {

std::vector<std::vector<double>> init_uniform_random(const DistinctEvents &distinct, int k,
                                                     Rng &rng) {
    std::vector<std::size_t> indices(distinct.points.size());
    std::iota(indices.begin(), indices.end(), 0);
    // Partial Fisher-Yates: k distinct states, uniform without replacement.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        const std::size_t pick =
            c + rng.uniform_index(static_cast<std::uint64_t>(indices.size() - c));
        std::swap(indices[static_cast<std::size_t>(c)], indices[pick]);
        centroids.push_back(distinct.points[indices[static_cast<std::size_t>(c)]]);
    }
    return centroids;
}

std::vector<std::vector<double>> init_kmeans_plus_plus(const DistinctEvents &distinct, int k,
                                                       Metric metric, Rng &rng) {
    const std::size_t n = distinct.points.size();
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = static_cast<double>(distinct.multiplicities[i]);
    }
    // First center uniform among observed events (multiplicity-weighted).
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    {
        const DiscreteSampler first(weights);
        centroids.push_back(distinct.points[first.draw(rng)]);
    }
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        nearest[i] = distance(centroids[0], distinct.points[i], metric);
    }
    while (static_cast<int>(centroids.size()) < k) {
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = weights[i] * nearest[i] * nearest[i];
        }
        const DiscreteSampler sampler(scores);
        const std::size_t pick = sampler.draw(rng);
        centroids.push_back(distinct.points[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] =
                std::min(nearest[i], distance(centroids.back(), distinct.points[i], metric));
        }
    }
    return centroids;
}

std::vector<std::vector<double>> init_from_hierarchical(const EventSample &sample,
                                                        const DistinctEvents &distinct, int k,
                                                        Metric metric) {
    ClusterStructure hierarchy = hierarchical_cluster(sample, 0.01, 5, metric);
    std::vector<std::vector<double>> centroids = std::move(hierarchy.centroids);
    if (static_cast<int>(centroids.size()) > k) {
        // Keep the k largest clusters.
        std::vector<std::size_t> order(centroids.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return hierarchy.counts[a] > hierarchy.counts[b];
        });
        std::vector<std::vector<double>> trimmed;
        trimmed.reserve(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) {
            trimmed.push_back(std::move(centroids[order[static_cast<std::size_t>(c)]]));
        }
        return trimmed;
    }
    // Pad with the state farthest from its nearest centroid.
    while (static_cast<int>(centroids.size()) < k) {
        std::size_t farthest = 0;
        double farthest_distance = -1.0;
        for (std::size_t i = 0; i < distinct.points.size(); ++i) {
            const int c = nearest_centroid(centroids, distinct.points[i], metric);
            const double d =
                distance(centroids[static_cast<std::size_t>(c)], distinct.points[i], metric);
            if (d > farthest_distance) {
                farthest_distance = d;
                farthest = i;
            }
        }
        centroids.push_back(distinct.points[farthest]);
    }
    return centroids;
}

} // namespace

std::vector<std::vector<double>> kmeans_init(const EventSample &sample, int k,
                                             ClusteringConfig::Init strategy, Metric metric,
                                             std::uint64_t seed) {
    if (k < 1) {
        throw InvalidParameterError("cluster count must be positive");
    }
    const DistinctEvents distinct = dedupe(sample);
    if (static_cast<std::size_t>(k) > distinct.points.size()) {
        throw InfeasibleKError("requested " + std::to_string(k) + " clusters but only " +
                               std::to_string(distinct.points.size()) +
                               " distinct states were observed");
    }
    Rng rng(seed);
    switch (strategy) {
    case ClusteringConfig::Init::UniformRandom:
        return init_uniform_random(distinct, k, rng);
    case ClusteringConfig::Init::KMeansPlusPlus:
        return init_kmeans_plus_plus(distinct, k, metric, rng);
    case ClusteringConfig::Init::Hierarchical:
        return init_from_hierarchical(sample, distinct, k, metric);
    }
    throw InvalidParameterError("unknown init strategy");
}

ClusterStructure kmeans(const EventSample &sample, int k, ClusteringConfig::Init init,
                        Metric metric, int max_iter, std::uint64_t seed) {
    if (max_iter < 1) {
        throw InvalidParameterError("max iterations must be at least 1");
    }
    const DistinctEvents distinct = dedupe(sample);
    std::vector<std::vector<double>> centroids = kmeans_init(sample, k, init, metric, seed);
    const std::size_t n = distinct.points.size();
    const std::size_t dims = static_cast<std::size_t>(distinct.modes);

    std::vector<int> distinct_assignment(n, -1);
    std::vector<double> iteration_objectives;
    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        // Assignment pass.
        bool changed = false;
        double objective_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest_centroid(centroids, distinct.points[i], metric);
            objective_sum += static_cast<double>(distinct.multiplicities[i]) *
                             distance(centroids[static_cast<std::size_t>(c)], distinct.points[i],
                                      metric);
            if (c != distinct_assignment[i]) {
                distinct_assignment[i] = c;
                changed = true;
            }
        }
        iteration_objectives.push_back(objective_sum /
                                       static_cast<double>(distinct.total_events));
        if (!changed) {
            converged = true;
            break;
        }

        // Update pass: weighted coordinate-wise means.
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dims, 0.0));
        std::vector<long> cluster_weight(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(distinct_assignment[i]);
            const double w = static_cast<double>(distinct.multiplicities[i]);
            for (std::size_t d = 0; d < dims; ++d) {
                sums[c][d] += w * distinct.points[i][d];
            }
            cluster_weight[c] += distinct.multiplicities[i];
        }
        std::vector<bool> reseed_taken(n, false);
        for (int c = 0; c < k; ++c) {
            if (cluster_weight[static_cast<std::size_t>(c)] == 0) {
                // Reseed an emptied cluster at the state farthest from its
                // current centroid; each state seeds at most one cluster
                // per pass.
                std::size_t farthest = 0;
                double farthest_distance = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (reseed_taken[i]) {
                        continue;
                    }
                    const auto assigned = static_cast<std::size_t>(distinct_assignment[i]);
                    const double d = distance(centroids[assigned], distinct.points[i], metric);
                    if (d > farthest_distance) {
                        farthest_distance = d;
                        farthest = i;
                    }
                }
                reseed_taken[farthest] = true;
                centroids[static_cast<std::size_t>(c)] = distinct.points[farthest];
                continue;
            }
            const double w = static_cast<double>(cluster_weight[static_cast<std::size_t>(c)]);
            for (std::size_t d = 0; d < dims; ++d) {
                centroids[static_cast<std::size_t>(c)][d] = sums[static_cast<std::size_t>(c)][d] / w;
            }
        }
    }

    ClusterStructure structure;
    structure.centroids = std::move(centroids);
    structure.metric = metric;
    structure.assignments = assignments_from_distinct(distinct, distinct_assignment);
    structure.counts = counts_from_distinct(distinct, distinct_assignment, k);
    structure.algorithm = "kmeans";
    structure.parameters = "k=" + std::to_string(k) + ",init=" + to_string(init) +
                           ",max_iter=" + std::to_string(max_iter);
    structure.seed = seed;
    structure.iteration_objectives = std::move(iteration_objectives);
    return structure;
}

ClusterStructure learn_structure(const EventSample &sample, const ClusteringConfig &config,
                                 std::uint64_t seed) {
    config.validate();
    switch (config.algorithm) {
    case ClusteringConfig::Algorithm::Bubble:
        return bubble_cluster(sample, config.bubble_radius, config.metric);
    case ClusteringConfig::Algorithm::Hierarchical:
        return hierarchical_cluster(sample, config.outlier_fraction, config.min_cluster_size,
                                    config.metric);
    case ClusteringConfig::Algorithm::KMeans:
        return kmeans(sample, config.k, config.init, config.metric, config.max_iterations, seed);
    }
    throw InvalidParameterError("unknown clustering algorithm");
}

double objective(const ClusterStructure &structure, const EventSample &sample) {
    if (structure.centroids.empty()) {
        throw CoverageError("structure has no centroids to cover the sample");
    }
    if (sample.events.empty()) {
        throw InvalidParameterError("cannot score an empty sample");
    }
    if (structure.modes() != sample.modes()) {
        throw DimensionError("structure and sample mode counts differ");
    }
    double total = 0.0;
    std::vector<double> point(static_cast<std::size_t>(sample.modes()));
    for (const ModeOccupation &event : sample.events) {
        for (std::size_t d = 0; d < point.size(); ++d) {
            point[d] = static_cast<double>(event.occupations()[d]);
        }
        const int c = nearest_centroid(structure.centroids, point, structure.metric);
        total += distance(structure.centroids[static_cast<std::size_t>(c)], point,
                          structure.metric);
    }
    return total / static_cast<double>(sample.events.size());
}

std::vector<long> assign(const ClusterStructure &structure, const EventSample &sample) {
    if (structure.centroids.empty()) {
        throw CoverageError("structure has no centroids");
    }
    if (structure.modes() != sample.modes()) {
        throw DimensionError("structure and sample mode counts differ");
    }
    std::vector<long> counts(structure.centroids.size(), 0);
    std::vector<double> point(static_cast<std::size_t>(sample.modes()));
    for (const ModeOccupation &event : sample.events) {
        for (std::size_t d = 0; d < point.size(); ++d) {
            point[d] = static_cast<double>(event.occupations()[d]);
        }
        ++counts[static_cast<std::size_t>(
            nearest_centroid(structure.centroids, point, structure.metric))];
    }
    return counts;
}

} // namespace bosonvalid
