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

#include "bosonvalid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bosonvalid/errors.hpp"

namespace bosonvalid {

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw DimensionError("correlation needs two equal-length, non-empty vectors");
    }
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw InvalidParameterError("correlation undefined for a constant vector");
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

// Ranks with average ranks on ties (1-based, as conventional).
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    return pearson_correlation(rx, ry);
}

SortedPairReport sorted_pair(const Distribution &p, const Distribution &q) {
    if (p.dims() != q.dims()) {
        throw DimensionError("sorted_pair requires matching (N, m)");
    }
    const std::vector<double> &pv = p.probabilities();
    const std::vector<double> &qv = q.probabilities();
    std::vector<std::size_t> order(pv.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pv[a] > pv[b]; });
    SortedPairReport report;
    report.p_sorted.reserve(pv.size());
    report.q_cosorted.reserve(pv.size());
    for (std::size_t index : order) {
        report.p_sorted.push_back(pv[index]);
        report.q_cosorted.push_back(qv[index]);
    }
    report.pearson_r = pearson_correlation(pv, qv);
    report.spearman_rho = spearman_correlation(pv, qv);
    return report;
}

std::pair<double, double> cumulative_fraction(const Distribution &p, const Distribution &q,
                                              double mass) {
    if (mass <= 0.0 || mass >= 1.0) {
        throw InvalidParameterError("target mass must lie in (0, 1)");
    }
    const SortedPairReport report = sorted_pair(p, q);
    const double dim = static_cast<double>(report.p_sorted.size());
    double accumulated = 0.0;
    std::size_t count_p = report.p_sorted.size();
    for (std::size_t i = 0; i < report.p_sorted.size(); ++i) {
        accumulated += report.p_sorted[i];
        if (accumulated >= mass) {
            count_p = i + 1;
            break;
        }
    }
    accumulated = 0.0;
    std::size_t count_q = report.q_cosorted.size();
    for (std::size_t i = 0; i < report.q_cosorted.size(); ++i) {
        accumulated += report.q_cosorted[i];
        if (accumulated >= mass) {
            count_q = i + 1;
            break;
        }
    }
    return {static_cast<double>(count_p) / dim, static_cast<double>(count_q) / dim};
}

namespace {

// Sorted occupied-mode tuples of every collision-free state, flattened to
// photons ints per state. For equal-N collision-free states the L1 distance
// is 2 (N - |shared modes|), so one merge pass gives the ball bucket.
std::vector<int> occupied_tuples(int photons, int modes) {
    std::vector<int> tuples;
    tuples.reserve(collision_free_dimension(photons, modes) * static_cast<std::uint64_t>(photons));
    for_each_collision_free(photons, modes, [&](std::span<const int> occupied) {
        tuples.insert(tuples.end(), occupied.begin(), occupied.end());
    });
    return tuples;
}

int shared_mode_count(const int *a, const int *b, int photons) {
    int i = 0, j = 0, shared = 0;
    while (i < photons && j < photons) {
        if (a[i] == b[j]) {
            ++shared;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return shared;
}

// Cumulative ball masses around reference outcome J: sums[s] = mass within
// L1 distance <= 2s, for both distributions in one pass.
void ball_masses(const std::vector<int> &tuples, int photons, std::uint64_t reference,
                 std::span<const double> pv, std::span<const double> qv,
                 std::vector<double> &p_balls, std::vector<double> &q_balls) {
    const std::size_t dim = pv.size();
    std::fill(p_balls.begin(), p_balls.end(), 0.0);
    std::fill(q_balls.begin(), q_balls.end(), 0.0);
    const int *ref = tuples.data() + reference * static_cast<std::uint64_t>(photons);
    for (std::size_t j = 0; j < dim; ++j) {
        const int shared = shared_mode_count(ref, tuples.data() + j * photons, photons);
        const std::size_t bucket = static_cast<std::size_t>(photons - shared); // k = 2*bucket
        p_balls[bucket] += pv[j];
        q_balls[bucket] += qv[j];
    }
    for (std::size_t s = 1; s < p_balls.size(); ++s) {
        p_balls[s] += p_balls[s - 1];
        q_balls[s] += q_balls[s - 1];
    }
}

std::vector<std::uint64_t> top_outcomes_by(std::span<const double> values, int count) {
    std::vector<std::uint64_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + count, order.end(),
                      [&](std::uint64_t a, std::uint64_t b) { return values[a] > values[b]; });
    order.resize(static_cast<std::size_t>(count));
    return order;
}

} // namespace

BallRatioReport ball_ratio_report(int n_unitaries, int top_outcomes, int photons, int modes,
                                  std::uint64_t seed, std::uint64_t capacity_guard) {
    if (n_unitaries < 1 || top_outcomes < 1) {
        throw InvalidParameterError("ensemble and outcome counts must be positive");
    }
    const std::uint64_t dim = collision_free_dimension(photons, modes);
    if (static_cast<std::uint64_t>(top_outcomes) > dim) {
        throw InvalidParameterError("more reference outcomes requested than states exist");
    }
    std::vector<int> input_modes(static_cast<std::size_t>(photons));
    std::iota(input_modes.begin(), input_modes.end(), 1);
    const ModeOccupation input = ModeOccupation::from_modes(input_modes, modes);

    BallRatioReport report;
    report.photons = photons;
    report.modes = modes;
    report.n_unitaries = n_unitaries;
    report.top_outcomes = top_outcomes;
    report.seed = seed;

    const std::vector<int> tuples = occupied_tuples(photons, modes);
    std::vector<double> p_balls(static_cast<std::size_t>(photons) + 1);
    std::vector<double> q_balls(static_cast<std::size_t>(photons) + 1);

    for (int u = 0; u < n_unitaries; ++u) {
        const UnitaryMatrix unitary = haar_random_unitary(modes, split_seed(seed, u));
        const Distribution p = exact_distribution(unitary, input,
                                                  ParticleModel::Indistinguishable,
                                                  capacity_guard);
        const Distribution q = exact_distribution(unitary, input, ParticleModel::Distinguishable,
                                                  capacity_guard);
        for (const bool sorted_by_p : {true, false}) {
            const std::vector<double> &lead =
                sorted_by_p ? p.probabilities() : q.probabilities();
            for (std::uint64_t outcome : top_outcomes_by(lead, top_outcomes)) {
                ball_masses(tuples, photons, outcome, p.probabilities(), q.probabilities(),
                            p_balls, q_balls);
                for (int s = 1; s <= photons; ++s) {
                    BallRatioRow row;
                    row.unitary = u;
                    row.outcome = outcome;
                    row.k = 2 * s;
                    row.p_ball = p_balls[static_cast<std::size_t>(s)];
                    row.q_ball = q_balls[static_cast<std::size_t>(s)];
                    row.ratio = sorted_by_p ? row.p_ball / row.q_ball : row.q_ball / row.p_ball;
                    row.sorted_by_p = sorted_by_p;
                    report.rows.push_back(row);
                }
            }
        }
    }

    for (int s = 1; s <= photons; ++s) {
        BallRatioStats stats;
        stats.k = 2 * s;
        long np = 0, nq = 0;
        for (const BallRatioRow &row : report.rows) {
            if (row.k != stats.k) {
                continue;
            }
            if (row.sorted_by_p) {
                stats.mean_rp += row.ratio;
                stats.fraction_rp_above_one += row.ratio > 1.0 ? 1.0 : 0.0;
                ++np;
            } else {
                stats.mean_rq += row.ratio;
                stats.fraction_rq_above_one += row.ratio > 1.0 ? 1.0 : 0.0;
                ++nq;
            }
        }
        stats.mean_rp /= static_cast<double>(np);
        stats.mean_rq /= static_cast<double>(nq);
        stats.fraction_rp_above_one /= static_cast<double>(np);
        stats.fraction_rq_above_one /= static_cast<double>(nq);
        report.stats.push_back(stats);
    }
    return report;
}

Eigen::MatrixXd mode_correlators(const EventSample &sample) {
    if (sample.events.empty()) {
        throw InvalidParameterError("cannot compute correlators of an empty sample");
    }
    sample.validate();
    const int modes = sample.modes();
    Eigen::VectorXd first = Eigen::VectorXd::Zero(modes);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(modes, modes);
    for (const ModeOccupation &event : sample.events) {
        const std::vector<int> occupied = event.occupied_modes_zero_based();
        for (int a : occupied) {
            first(a) += 1.0;
            for (int b : occupied) {
                second(a, b) += 1.0;
            }
        }
    }
    const double n = static_cast<double>(sample.events.size());
    first /= n;
    second /= n;
    return second - first * first.transpose();
}

} // namespace bosonvalid
