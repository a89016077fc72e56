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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bosonvalid/clustering.hpp"
#include "bosonvalid/errors.hpp"
#include "bosonvalid/io.hpp"
#include "bosonvalid/unitary.hpp"
#include "test_util.hpp"

using namespace bosonvalid;

namespace {

EventSample build_sample(int modes, const std::vector<std::pair<const char *, int>> &states) {
    EventSample sample;
    for (const auto &[text, multiplicity] : states) {
        for (int i = 0; i < multiplicity; ++i) {
            sample.events.push_back(ModeOccupation::parse(text, modes));
        }
    }
    sample.input_state = sample.events.front();
    return sample;
}

EventSample reference_sample(std::size_t events, std::uint64_t seed) {
    static const UnitaryMatrix unitary = haar_random_unitary(13, 5);
    static const Distribution dist = exact_distribution(
        unitary, ModeOccupation::parse("6,7,8", 13), ParticleModel::Indistinguishable);
    return brute_force_sample(dist, events, seed);
}

} // namespace

TEST_CASE("bubble clustering extremes") {
    const EventSample sample = reference_sample(300, 1);

    const ClusterStructure one = bubble_cluster(sample, 100.0, Metric::L1);
    CHECK(one.cluster_count() == 1);
    CHECK(one.counts[0] == 300);

    const ClusterStructure singletons = bubble_cluster(sample, 0.5, Metric::L1);
    std::set<std::vector<int>> distinct;
    for (const ModeOccupation &event : sample.events) {
        distinct.insert(event.occupations());
    }
    CHECK(singletons.cluster_count() == static_cast<int>(distinct.size()));
}

TEST_CASE("bubble clustering is deterministic and breaks frequency ties by state order") {
    const EventSample sample =
        build_sample(4, {{"2,3", 2}, {"1,2", 2}, {"1,3", 1}});
    const ClusterStructure structure = bubble_cluster(sample, 1.5, Metric::L1);
    REQUIRE(structure.cluster_count() == 3);
    // Ties at multiplicity 2: "1,2" precedes "2,3" in state order.
    CHECK(structure.centroids[0] == std::vector<double>{1.0, 1.0, 0.0, 0.0});
    CHECK(structure.centroids[1] == std::vector<double>{0.0, 1.0, 1.0, 0.0});
    CHECK(structure.counts == std::vector<long>{2, 2, 1});

    const ClusterStructure again = bubble_cluster(sample, 1.5, Metric::L1);
    CHECK(structure.centroids == again.centroids);
    CHECK(structure.assignments == again.assignments);

    CHECK_THROWS_AS(bubble_cluster(sample, 0.0, Metric::L1), InvalidParameterError);
}

TEST_CASE("bubble absorbs everything within the radius of the heaviest state") {
    const EventSample sample =
        build_sample(4, {{"1,2", 5}, {"1,3", 2}, {"3,4", 2}});
    // d("1,2","1,3") = 2 < 2.5; d("1,2","3,4") = 4.
    const ClusterStructure structure = bubble_cluster(sample, 2.5, Metric::L1);
    REQUIRE(structure.cluster_count() == 2);
    CHECK(structure.counts == std::vector<long>{7, 2});
}

TEST_CASE("hierarchical clustering halts immediately on two dense states") {
    const EventSample sample = build_sample(13, {{"1,2,3", 8}, {"9,10,11", 8}});
    const ClusterStructure structure = hierarchical_cluster(sample, 0.0, 5, Metric::L2);
    CHECK(structure.cluster_count() == 2);
    CHECK(structure.counts == std::vector<long>{8, 8});
    CHECK(structure.outlier_events == 0);
}

TEST_CASE("hierarchical clustering agglomerates two separable blobs of singletons") {
    const EventSample sample = build_sample(
        13, {{"1,2,3", 1}, {"1,2,4", 1}, {"1,3,4", 1}, {"2,3,4", 1}, {"1,2,5", 1},
             {"9,10,11", 1}, {"9,10,12", 1}, {"9,11,12", 1}, {"10,11,12", 1}, {"9,10,13", 1}});
    const ClusterStructure structure = hierarchical_cluster(sample, 0.0, 5, Metric::L1);
    REQUIRE(structure.cluster_count() == 2);
    CHECK(structure.counts == std::vector<long>{5, 5});
    // The two centroids sit in disjoint mode ranges.
    CHECK(structure.centroids[0][0] > 0.0);
    CHECK(structure.centroids[1][0] == 0.0);
}

TEST_CASE("hierarchical clustering reports unreachable halting") {
    const EventSample sample =
        build_sample(13, {{"1,2,3", 1}, {"4,5,6", 1}, {"7,8,9", 1}, {"10,11,12", 1}});
    CHECK_THROWS_AS(hierarchical_cluster(sample, 0.0, 5, Metric::L1), HaltingError);
}

TEST_CASE("hierarchical outliers are dropped from the structure") {
    const EventSample sample =
        build_sample(13, {{"1,2,3", 10}, {"1,2,4", 9}, {"9,10,11", 1}});
    const ClusterStructure structure = hierarchical_cluster(sample, 0.05, 5, Metric::L1);
    CHECK(structure.cluster_count() == 2);
    CHECK(structure.counts == std::vector<long>{10, 9});
    CHECK(structure.outlier_events == 1);
    // The outlier event keeps assignment -1 in the learning sample.
    CHECK(std::count(structure.assignments.begin(), structure.assignments.end(), -1) == 1);
}

TEST_CASE("hierarchical defaults follow the one-percent, five-event recipe") {
    const EventSample sample = reference_sample(2000, 3);
    const ClusterStructure structure = hierarchical_cluster(sample, 0.01, 5, Metric::L2);
    CHECK(structure.cluster_count() >= 3);
    const double outlier_fraction = static_cast<double>(structure.outlier_events) /
                                    static_cast<double>(sample.events.size());
    CHECK(outlier_fraction <= 0.01);
    for (long count : structure.counts) {
        CHECK(count >= 5);
    }
}

TEST_CASE("kmeans_init edge cases") {
    const EventSample sample = build_sample(
        13, {{"1,2,3", 3}, {"1,2,4", 2}, {"9,10,11", 4}, {"9,10,12", 1}, {"5,6,7", 2}});

    SUBCASE("k equal to the distinct count selects every state") {
        for (const auto strategy :
             {ClusteringConfig::Init::UniformRandom, ClusteringConfig::Init::KMeansPlusPlus}) {
            const auto centroids = kmeans_init(sample, 5, strategy, Metric::L2, 9);
            CHECK(centroids.size() == 5);
            std::set<std::vector<double>> unique(centroids.begin(), centroids.end());
            CHECK(unique.size() == 5);
        }
    }

    SUBCASE("k beyond the distinct count is infeasible") {
        CHECK_THROWS_AS(
            kmeans_init(sample, 6, ClusteringConfig::Init::UniformRandom, Metric::L2, 9),
            InfeasibleKError);
    }

    SUBCASE("k = 1 kmeans++ picks an observed state") {
        const auto centroids =
            kmeans_init(sample, 1, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, 9);
        REQUIRE(centroids.size() == 1);
        std::set<std::vector<double>> points;
        for (const ModeOccupation &event : sample.events) {
            points.insert(
                std::vector<double>(event.occupations().begin(), event.occupations().end()));
        }
        CHECK(points.count(centroids[0]) == 1);
    }
}

TEST_CASE("kmeans++ never repeats a center") {
    const EventSample sample = reference_sample(500, 11);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto centroids =
            kmeans_init(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, seed);
        std::set<std::vector<double>> unique(centroids.begin(), centroids.end());
        CHECK(unique.size() == centroids.size());
    }
}

TEST_CASE("kmeans++ splits well-separated blobs") {
    const EventSample sample = build_sample(
        12, {{"1,2,3,4,5", 100}, {"1,2,3,4,6", 3}, {"8,9,10,11,12", 100}, {"7,9,10,11,12", 3}});
    int split = 0;
    constexpr int kSeeds = 1000;
    for (int seed = 0; seed < kSeeds; ++seed) {
        const auto centroids = kmeans_init(sample, 2, ClusteringConfig::Init::KMeansPlusPlus,
                                           Metric::L1, static_cast<std::uint64_t>(seed));
        // Blob A lives on modes 1..6, blob B on 7..12.
        int blob_a = 0;
        for (const auto &centroid : centroids) {
            double left = 0.0;
            for (int d = 0; d < 6; ++d) {
                left += centroid[static_cast<std::size_t>(d)];
            }
            blob_a += left > 2.5 ? 1 : 0;
        }
        split += blob_a == 1 ? 1 : 0;
    }
    CHECK(split >= 990);
}

TEST_CASE("hierarchical init truncates and pads to k") {
    const EventSample sample = reference_sample(500, 13);
    for (int k : {5, 25, 60}) {
        const auto centroids =
            kmeans_init(sample, k, ClusteringConfig::Init::Hierarchical, Metric::L2, 1);
        CHECK(static_cast<int>(centroids.size()) == k);
    }
}

TEST_CASE("kmeans with k = 1 finds the weighted mean") {
    const EventSample sample = build_sample(4, {{"1,2", 1}, {"3,4", 1}});
    const ClusterStructure structure =
        kmeans(sample, 1, ClusteringConfig::Init::UniformRandom, Metric::L1, 50, 3);
    REQUIRE(structure.cluster_count() == 1);
    CHECK(structure.centroids[0] == std::vector<double>{0.5, 0.5, 0.5, 0.5});
    CHECK(objective(structure, sample) == doctest::Approx(2.0)); // L1 to the midpoint
}

TEST_CASE("kmeans converges immediately when initialized at the support") {
    const EventSample sample = build_sample(13, {{"1,2,3", 6}, {"9,10,11", 7}, {"5,6,7", 5}});
    const ClusterStructure structure =
        kmeans(sample, 3, ClusteringConfig::Init::UniformRandom, Metric::L2, 50, 1);
    CHECK(structure.iteration_objectives.size() <= 2);
    CHECK(structure.iteration_objectives.back() == doctest::Approx(0.0));
    std::vector<long> counts = structure.counts;
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<long>{5, 6, 7});
}

TEST_CASE("kmeans objective is non-increasing across iterations") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const EventSample sample = reference_sample(500, 100 + seed);
        const ClusterStructure structure =
            kmeans(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, 100, seed);
        REQUIRE(!structure.iteration_objectives.empty());
        for (std::size_t i = 1; i < structure.iteration_objectives.size(); ++i) {
            CHECK(structure.iteration_objectives[i] <=
                  structure.iteration_objectives[i - 1] + 1e-9);
        }
    }
}

TEST_CASE("kmeans is deterministic given seed and init") {
    const EventSample sample = reference_sample(500, 21);
    const ClusterStructure a =
        kmeans(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, 100, 77);
    const ClusterStructure b =
        kmeans(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, 100, 77);
    CHECK(a.centroids == b.centroids);
    CHECK(a.assignments == b.assignments);
    CHECK(a.counts == b.counts);
}

TEST_CASE("assignment agrees with the learned structure and is idempotent") {
    const EventSample sample = reference_sample(800, 23);
    const ClusterStructure structure =
        kmeans(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L2, 100, 5);
    const std::vector<long> counts = assign(structure, sample);
    CHECK(counts == structure.counts);
    CHECK(assign(structure, sample) == counts);
}

TEST_CASE("assignment maps everything to a single centroid") {
    const EventSample sample = build_sample(4, {{"1,2", 3}, {"3,4", 2}});
    ClusterStructure structure;
    structure.metric = Metric::L2;
    structure.centroids = {{0.0, 0.0, 0.0, 0.0}};
    structure.counts = {0};
    const std::vector<long> counts = assign(structure, sample);
    CHECK(counts == std::vector<long>{5});
}

TEST_CASE("assignment checks dimensions") {
    const EventSample sample = build_sample(4, {{"1,2", 3}});
    ClusterStructure structure;
    structure.centroids = {{0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(assign(structure, sample), DimensionError);
    ClusterStructure empty;
    CHECK_THROWS_AS(assign(empty, sample), CoverageError);
    CHECK_THROWS_AS(objective(empty, sample), CoverageError);
}

TEST_CASE("objective of identical events is zero") {
    const EventSample sample = build_sample(4, {{"1,2", 9}});
    const ClusterStructure structure =
        kmeans(sample, 1, ClusteringConfig::Init::UniformRandom, Metric::L1, 10, 0);
    CHECK(objective(structure, sample) == doctest::Approx(0.0));
}

TEST_CASE("cluster structures serialize and reassign identically") {
    const EventSample sample = reference_sample(600, 29);
    const ClusterStructure structure =
        kmeans(sample, 25, ClusteringConfig::Init::KMeansPlusPlus, Metric::L1, 100, 6);
    const ClusterStructure loaded = structure_from_json(structure_to_json(structure));
    CHECK(loaded.metric == structure.metric);
    CHECK(loaded.centroids == structure.centroids);
    CHECK(assign(loaded, sample) == assign(structure, sample));
}

TEST_CASE("config validation") {
    ClusteringConfig config;
    config.validate();

    ClusteringConfig bad_k = config;
    bad_k.k = 2;
    CHECK_THROWS_AS(bad_k.validate(), InvalidParameterError);

    ClusteringConfig bad_min = config;
    bad_min.min_cluster_size = 4;
    CHECK_THROWS_AS(bad_min.validate(), InvalidParameterError);

    ClusteringConfig bad_votes = config;
    bad_votes.voting_trials = 4;
    CHECK_THROWS_AS(bad_votes.validate(), InvalidParameterError);

    ClusteringConfig bad_fraction = config;
    bad_fraction.outlier_fraction = 1.0;
    CHECK_THROWS_AS(bad_fraction.validate(), InvalidParameterError);
}

TEST_CASE("learn_structure dispatches on the algorithm tag") {
    const EventSample sample = reference_sample(500, 31);
    ClusteringConfig config;
    config.algorithm = ClusteringConfig::Algorithm::Bubble;
    config.bubble_radius = 4.0;
    config.metric = Metric::L1;
    CHECK(learn_structure(sample, config, 1).algorithm == "bubble");
    config.algorithm = ClusteringConfig::Algorithm::Hierarchical;
    CHECK(learn_structure(sample, config, 1).algorithm == "hierarchical");
    config.algorithm = ClusteringConfig::Algorithm::KMeans;
    CHECK(learn_structure(sample, config, 1).algorithm == "kmeans");
}
