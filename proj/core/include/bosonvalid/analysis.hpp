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

#ifndef BOSONVALID_ANALYSIS_HPP
#define BOSONVALID_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bosonvalid/sampler.hpp"

namespace bosonvalid {

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks on ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct SortedPairReport {
    /// p in descending order; q permuted by the same ordering.
    std::vector<double> p_sorted;
    std::vector<double> q_cosorted;
    /// Correlations of the (unsorted) paired vectors.
    double pearson_r = 0.0;
    double spearman_rho = 0.0;
};

SortedPairReport sorted_pair(const Distribution &p, const Distribution &q);

/// Smallest outcome-count prefix (under p's descending order, q co-sorted)
/// whose cumulative probability reaches mass, as a fraction of the Hilbert
/// dimension, for p and for q respectively.
std::pair<double, double> cumulative_fraction(const Distribution &p, const Distribution &q,
                                              double mass);

struct BallRatioRow {
    int unitary = 0;
    /// Dense rank of the reference outcome J.
    std::uint64_t outcome = 0;
    int k = 0;
    double p_ball = 0.0;
    double q_ball = 0.0;
    /// P(k)/Q(k) when sorted by p, Q(k)/P(k) when sorted by q.
    double ratio = 0.0;
    bool sorted_by_p = true;
};

struct BallRatioStats {
    int k = 0;
    double mean_rp = 0.0;
    double mean_rq = 0.0;
    double fraction_rp_above_one = 0.0;
    double fraction_rq_above_one = 0.0;
};

struct BallRatioReport {
    int photons = 0;
    int modes = 0;
    int n_unitaries = 0;
    int top_outcomes = 0;
    std::uint64_t seed = 0;
    std::vector<BallRatioRow> rows;
    /// One entry per k = 2, 4, ..., 2N.
    std::vector<BallRatioStats> stats;
};

/// For each of n_unitaries Haar matrices (unitary u drawn with
/// split_seed(seed, u)) and each of the top_outcomes highest-probability
/// outcomes J: the probability mass P(k) within L1 distance <= k of J, the
/// distinguishable mass Q(k), and their ratio, for every even k up to 2N.
/// The roles of p and q are then swapped for the R_q rows.
BallRatioReport ball_ratio_report(int n_unitaries, int top_outcomes, int photons, int modes,
                                  std::uint64_t seed,
                                  std::uint64_t capacity_guard = kDenseCapacityGuard);

/// Two-mode correlators C_ij = <n_i n_j> - <n_i><n_j> over the events of a
/// sample. Symmetric; the diagonal carries the per-mode variances.
Eigen::MatrixXd mode_correlators(const EventSample &sample);

} // namespace bosonvalid

#endif // BOSONVALID_ANALYSIS_HPP
