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

#ifndef BOSONVALID_CLUSTERING_HPP
#define BOSONVALID_CLUSTERING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bosonvalid/fock.hpp"
#include "bosonvalid/sampler.hpp"

namespace bosonvalid {

struct ClusteringConfig {
    enum class Algorithm { Bubble, Hierarchical, KMeans };
    enum class Init { UniformRandom, KMeansPlusPlus, Hierarchical };

    Algorithm algorithm = Algorithm::KMeans;
    int k = 25;
    /// Bubble cutoff; events strictly closer than this join the bubble.
    /// Trained on the (3,13) reference scenario (see tools/experiment).
    double bubble_radius = 4.0;
    double outlier_fraction = 0.01;
    int min_cluster_size = 5;
    int max_iterations = 100;
    Metric metric = Metric::L2;
    Init init = Init::KMeansPlusPlus;
    int voting_trials = 11;

    void validate() const;
};

std::string to_string(ClusteringConfig::Algorithm algorithm);
ClusteringConfig::Algorithm algorithm_from_string(std::string_view text);
std::string to_string(ClusteringConfig::Init init);
ClusteringConfig::Init init_from_string(std::string_view text);

/// A cluster structure learned from a reference sample: centroids plus the
/// membership of the learning sample. Assignment of any event is
/// nearest-centroid under the structure's metric, ties to the lowest id.
struct ClusterStructure {
    std::vector<std::vector<double>> centroids;
    Metric metric = Metric::L2;
    /// Per learning-sample event, cluster id or -1 for outliers.
    std::vector<int> assignments;
    /// Learning-sample events per cluster (multiplicity included).
    std::vector<long> counts;
    long outlier_events = 0;

    // provenance
    std::string algorithm;
    std::string parameters;
    std::uint64_t seed = 0;

    /// K-means: objective after each assignment pass (empty otherwise).
    std::vector<double> iteration_objectives;

    int cluster_count() const { return static_cast<int>(centroids.size()); }
    int modes() const { return centroids.empty() ? 0 : static_cast<int>(centroids[0].size()); }
};

/// Index of the nearest centroid (ties to the lowest id).
int nearest_centroid(std::span<const std::vector<double>> centroids,
                     std::span<const double> point, Metric metric);

/// Wang-Duan bubble clustering: repeatedly pick the unassigned state with
/// the highest observation frequency (ties by state order) as a center and
/// absorb every unassigned state with distance < radius. Deterministic.
ClusterStructure bubble_cluster(const EventSample &sample, double radius, Metric metric);

/// Bottom-up agglomeration from per-state singletons, merging the two
/// clusters with nearest centroids (weighted means), until no more than
/// outlier_fraction of the events sit in clusters smaller than min_size.
/// Those small clusters become the outlier set. Throws HaltingError if the
/// condition cannot be met with at least 3 clusters.
ClusterStructure hierarchical_cluster(const EventSample &sample, double outlier_fraction,
                                      int min_size, Metric metric);

/// Initial centroids for K-means under the given strategy.
std::vector<std::vector<double>> kmeans_init(const EventSample &sample, int k,
                                             ClusteringConfig::Init strategy, Metric metric,
                                             std::uint64_t seed);

/// Lloyd iterations: nearest-centroid assignment (ties to lowest id) and
/// weighted-mean centroid updates until assignments are stable or max_iter.
/// Empty clusters are reseeded at the event farthest from its centroid.
ClusterStructure kmeans(const EventSample &sample, int k, ClusteringConfig::Init init,
                        Metric metric, int max_iter, std::uint64_t seed);

/// Dispatch on config.algorithm.
ClusterStructure learn_structure(const EventSample &sample, const ClusteringConfig &config,
                                 std::uint64_t seed);

/// Mean distance of the sample's events to their nearest centroid.
double objective(const ClusterStructure &structure, const EventSample &sample);

/// Per-cluster counts of a sample mapped into an existing structure. The
/// structure's outlier set plays no role here; every event is assigned.
std::vector<long> assign(const ClusterStructure &structure, const EventSample &sample);

} // namespace bosonvalid

#endif // BOSONVALID_CLUSTERING_HPP
