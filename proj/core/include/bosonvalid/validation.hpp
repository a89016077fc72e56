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

#ifndef BOSONVALID_VALIDATION_HPP
#define BOSONVALID_VALIDATION_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosonvalid/clustering.hpp"
#include "bosonvalid/sampler.hpp"

namespace bosonvalid {

/// Upper-tail probability P(X > statistic) for a chi-square variable with
/// dof degrees of freedom, via the regularized incomplete gamma function
/// (series for small arguments, continued fraction otherwise).
double chi_square_pvalue(double statistic, int dof);

struct MergeLogEntry {
    int from_cluster = 0;
    int into_cluster = 0;
    double expected_reference = 0.0;
    double expected_candidate = 0.0;
};

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool compatible = true;
    int retained_clusters = 0;
    std::vector<MergeLogEntry> merges;
};

/// Two-sample chi-square on per-cluster counts. Clusters whose expected
/// count in either sample falls below 5 are folded into the
/// nearest-centroid retained cluster first (logged); nu = retained - 1.
/// Throws DegenerateStructureError if fewer than 3 clusters survive.
ChiSquareResult two_sample_chi_square(std::span<const long> reference_counts,
                                      std::span<const long> candidate_counts,
                                      std::span<const std::vector<double>> centroids,
                                      Metric metric, double alpha);

/// The compatibility test: learn a structure on the reference sample,
/// assign both samples into it, and run the two-sample chi-square on the
/// per-cluster counts. Verdict compatible iff p > alpha.
ChiSquareResult compatibility_test(const EventSample &reference, const EventSample &candidate,
                                   const ClusteringConfig &config, double alpha,
                                   std::uint64_t seed);

struct MajorityVoteResult {
    bool compatible = true;
    std::vector<ChiSquareResult> trials;
};

/// Runs the compatibility test an odd number of times with split seeds
/// (trial t uses split_seed(seed, t)) and takes the majority verdict.
MajorityVoteResult majority_vote_test(const EventSample &reference, const EventSample &candidate,
                                      const ClusteringConfig &config, double alpha, int trials,
                                      std::uint64_t seed);

struct ScattershotResult {
    ChiSquareResult combined;
    std::vector<ChiSquareResult> per_input;
};

/// Scattershot generalization: per-input compatibility statistics are
/// summed (chi-square additivity) and the degrees of freedom accumulate,
/// giving one verdict for the whole variable-input data set. Pair i uses
/// split_seed(seed, i).
ScattershotResult scattershot_test(std::span<const std::pair<EventSample, EventSample>> pairs,
                                   const ClusteringConfig &config, double alpha,
                                   std::uint64_t seed);

/// Uniform draw of n events without replacement from the pool.
EventSample reshuffle(const EventSample &pool, std::size_t n, std::uint64_t seed);

/// Recipe for a confusion-matrix experiment: per trial, two samples from
/// the reference model and one from the alternative model are drawn, and
/// one compatible plus one incompatible test is tallied.
struct ExperimentSpec {
    ParticleModel reference_model = ParticleModel::Indistinguishable;
    ParticleModel alternative_model = ParticleModel::Distinguishable;
    int photons = 3;
    int modes = 13;
    std::size_t sample_size = 1000;
    int trials = 100;
    int n_unitaries = 1;
    /// "exact" draws from the dense distribution, "mcmc" runs the chain for
    /// the reference model (the alternative models sample directly).
    std::string method = "exact";
    ClusteringConfig config;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    /// Input occupation; empty means modes 1..N.
    ModeOccupation input;
    /// When positive, per-trial samples are reshuffled from pools of this
    /// size instead of being drawn fresh.
    std::size_t reshuffle_pool = 0;
    McmcOptions mcmc;

    ModeOccupation resolved_input() const;
    void validate() const;
};

struct ClassOutcome {
    long trials = 0;
    long successes = 0;
    double success_percent() const {
        return trials == 0 ? 0.0
                           : 100.0 * static_cast<double>(successes) / static_cast<double>(trials);
    }
    /// Binomial standard error of the success percentage.
    double std_error_percent() const;
};

struct ConfusionMatrix {
    std::string reference_label = "ind";
    std::string alternative_label = "dis";
    /// counts[t][p]: t = true class (0 compatible pair, 1 incompatible
    /// pair), p = predicted class (0 compatible, 1 incompatible).
    std::array<std::array<long, 2>, 2> counts = {{{0, 0}, {0, 0}}};
    long degenerate_trials = 0;
    /// Success percentages per unitary, [compatible, incompatible].
    std::vector<std::array<double, 2>> per_unitary_success;

    ClassOutcome compatible_class() const;
    ClassOutcome incompatible_class() const;
    /// Mean per-unitary success percentages [compatible, incompatible].
    std::array<double, 2> mean_per_unitary_success() const;
    /// Aligned, human-readable rendering.
    std::string to_text() const;
};

/// Runs the full experiment; trials are independent given their split
/// seeds, so the tally is identical for any jobs count (0 = all cores).
ConfusionMatrix run_confusion_experiment(const ExperimentSpec &spec, int jobs = 0);

} // namespace bosonvalid

#endif // BOSONVALID_VALIDATION_HPP
