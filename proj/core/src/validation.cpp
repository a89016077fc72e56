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

#include "bosonvalid/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "bosonvalid/errors.hpp"
#include "bosonvalid/rng.hpp"

namespace bosonvalid {

namespace {

// Regularized lower incomplete gamma P(a, x) by power series; valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            break;
        }
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double chi_square_pvalue(double statistic, int dof) {
    if (dof < 1) {
        throw InvalidParameterError("degrees of freedom must be at least 1");
    }
    if (statistic < 0.0) {
        throw InvalidParameterError("chi-square statistic must be non-negative");
    }
    if (statistic == 0.0) {
        return 1.0;
    }
    const double a = 0.5 * static_cast<double>(dof);
    const double x = 0.5 * statistic;
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x);
    }
    return gamma_q_continued_fraction(a, x);
}

ChiSquareResult two_sample_chi_square(std::span<const long> reference_counts,
                                      std::span<const long> candidate_counts,
                                      std::span<const std::vector<double>> centroids,
                                      Metric metric, double alpha) {
    const std::size_t k = reference_counts.size();
    if (candidate_counts.size() != k || centroids.size() != k) {
        throw DimensionError("count vectors and centroids must have one entry per cluster");
    }
    if (k == 0) {
        throw DegenerateStructureError("no clusters to test");
    }
    std::vector<long> ref(reference_counts.begin(), reference_counts.end());
    std::vector<long> cand(candidate_counts.begin(), candidate_counts.end());
    const double n_ref = static_cast<double>(std::accumulate(ref.begin(), ref.end(), 0L));
    const double n_cand = static_cast<double>(std::accumulate(cand.begin(), cand.end(), 0L));
    const double n = n_ref + n_cand;
    if (n_ref <= 0.0 || n_cand <= 0.0) {
        throw InvalidParameterError("both samples must contain events");
    }

    std::vector<bool> active(k, true);
    int active_count = static_cast<int>(k);
    ChiSquareResult result;
    result.alpha = alpha;

    // Fold clusters with an expected count below 5 (in either sample) into
    // their nearest retained neighbour before evaluating the statistic.
    while (true) {
        int worst = -1;
        double worst_expected = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            if (!active[i]) {
                continue;
            }
            const double n_i = static_cast<double>(ref[i] + cand[i]);
            const double expected = std::min(n_i * n_ref / n, n_i * n_cand / n);
            if (expected < worst_expected) {
                worst_expected = expected;
                worst = static_cast<int>(i);
            }
        }
        if (worst_expected >= 5.0) {
            break;
        }
        if (active_count <= 3) {
            throw DegenerateStructureError(
                "expected-count merging would leave fewer than 3 clusters; no verdict");
        }
        int into = -1;
        double into_distance = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            if (!active[i] || static_cast<int>(i) == worst) {
                continue;
            }
            const double d = distance(centroids[static_cast<std::size_t>(worst)], centroids[i],
                                      metric);
            if (d < into_distance) {
                into_distance = d;
                into = static_cast<int>(i);
            }
        }
        const double n_worst = static_cast<double>(ref[static_cast<std::size_t>(worst)] +
                                                   cand[static_cast<std::size_t>(worst)]);
        result.merges.push_back(MergeLogEntry{worst, into, n_worst * n_ref / n,
                                              n_worst * n_cand / n});
        ref[static_cast<std::size_t>(into)] += ref[static_cast<std::size_t>(worst)];
        cand[static_cast<std::size_t>(into)] += cand[static_cast<std::size_t>(worst)];
        active[static_cast<std::size_t>(worst)] = false;
        --active_count;
    }

    double statistic = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!active[i]) {
            continue;
        }
        const double n_i = static_cast<double>(ref[i] + cand[i]);
        const double expected_ref = n_i * n_ref / n;
        const double expected_cand = n_i * n_cand / n;
        const double dev_ref = static_cast<double>(ref[i]) - expected_ref;
        const double dev_cand = static_cast<double>(cand[i]) - expected_cand;
        statistic += dev_ref * dev_ref / expected_ref + dev_cand * dev_cand / expected_cand;
    }
    result.statistic = statistic;
    result.retained_clusters = active_count;
    result.dof = active_count - 1;
    result.p_value = chi_square_pvalue(statistic, result.dof);
    result.compatible = result.p_value > alpha;
    return result;
}

ChiSquareResult compatibility_test(const EventSample &reference, const EventSample &candidate,
                                   const ClusteringConfig &config, double alpha,
                                   std::uint64_t seed) {
    if (reference.events.empty() || candidate.events.empty()) {
        throw InvalidParameterError("both samples must be non-empty");
    }
    if (reference.photons() != candidate.photons() || reference.modes() != candidate.modes()) {
        throw DimensionError("reference and candidate samples must share (N, m)");
    }
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw InvalidParameterError("significance level must lie in (0, 1)");
    }
    const ClusterStructure structure = learn_structure(reference, config, seed);
    const std::vector<long> ref_counts = assign(structure, reference);
    const std::vector<long> cand_counts = assign(structure, candidate);
    return two_sample_chi_square(ref_counts, cand_counts, structure.centroids, structure.metric,
                                 alpha);
}

MajorityVoteResult majority_vote_test(const EventSample &reference, const EventSample &candidate,
                                      const ClusteringConfig &config, double alpha, int trials,
                                      std::uint64_t seed) {
    if (trials < 1 || trials % 2 == 0) {
        throw InvalidParameterError("majority voting needs an odd, positive number of trials");
    }
    MajorityVoteResult result;
    result.trials.reserve(static_cast<std::size_t>(trials));
    int compatible_votes = 0;
    for (int t = 0; t < trials; ++t) {
        result.trials.push_back(
            compatibility_test(reference, candidate, config, alpha, split_seed(seed, t)));
        if (result.trials.back().compatible) {
            ++compatible_votes;
        }
    }
    result.compatible = 2 * compatible_votes > trials;
    return result;
}

ScattershotResult scattershot_test(std::span<const std::pair<EventSample, EventSample>> pairs,
                                   const ClusteringConfig &config, double alpha,
                                   std::uint64_t seed) {
    if (pairs.empty()) {
        throw InvalidParameterError("scattershot test needs at least one input pair");
    }
    ScattershotResult result;
    result.combined.alpha = alpha;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto &[reference, candidate] = pairs[i];
        if (!(reference.input_state == candidate.input_state)) {
            throw DimensionError("scattershot pair " + std::to_string(i) +
                                 " mixes inputs " + reference.input_state.to_string() + " and " +
                                 candidate.input_state.to_string());
        }
        try {
            result.per_input.push_back(
                compatibility_test(reference, candidate, config, alpha, split_seed(seed, i)));
        } catch (const DegenerateStructureError &error) {
            throw DegenerateStructureError("input " + reference.input_state.to_string() + ": " +
                                           error.what());
        }
        result.combined.statistic += result.per_input.back().statistic;
        result.combined.dof += result.per_input.back().dof;
        result.combined.retained_clusters += result.per_input.back().retained_clusters;
    }
    result.combined.p_value = chi_square_pvalue(result.combined.statistic, result.combined.dof);
    result.combined.compatible = result.combined.p_value > alpha;
    return result;
}

EventSample reshuffle(const EventSample &pool, std::size_t n, std::uint64_t seed) {
    if (n >= pool.events.size()) {
        throw InsufficientDataError("reshuffle of " + std::to_string(n) + " events needs a pool "
                                    "larger than that, got " +
                                    std::to_string(pool.events.size()));
    }
    Rng rng(seed);
    std::vector<std::size_t> indices(pool.events.size());
    std::iota(indices.begin(), indices.end(), 0);
    EventSample sample;
    sample.input_state = pool.input_state;
    sample.model = pool.model;
    sample.seed = seed;
    sample.source = "reshuffle";
    sample.events.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = i + rng.uniform_index(indices.size() - i);
        std::swap(indices[i], indices[pick]);
        sample.events.push_back(pool.events[indices[i]]);
    }
    return sample;
}

ModeOccupation ExperimentSpec::resolved_input() const {
    if (input.photon_count() > 0) {
        return input;
    }
    std::vector<int> modes_1based(static_cast<std::size_t>(photons));
    std::iota(modes_1based.begin(), modes_1based.end(), 1);
    return ModeOccupation::from_modes(modes_1based, modes);
}

void ExperimentSpec::validate() const {
    collision_free_dimension(photons, modes);
    if (sample_size < 1) {
        throw InvalidParameterError("sample size must be positive");
    }
    if (trials < 1 || n_unitaries < 1) {
        throw InvalidParameterError("trials and unitaries must be positive");
    }
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw InvalidParameterError("significance level must lie in (0, 1)");
    }
    if (method != "exact" && method != "mcmc") {
        throw InvalidParameterError("sampling method must be \"exact\" or \"mcmc\"");
    }
    if (reshuffle_pool != 0 && reshuffle_pool <= sample_size) {
        throw InvalidParameterError("reshuffle pool must exceed the sample size");
    }
    const ModeOccupation in = resolved_input();
    if (in.photon_count() != photons || in.mode_count() != modes) {
        throw DimensionError("experiment input state does not match (N, m)");
    }
    config.validate();
}

double ClassOutcome::std_error_percent() const {
    if (trials == 0) {
        return 0.0;
    }
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    return 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

ClassOutcome ConfusionMatrix::compatible_class() const {
    return ClassOutcome{counts[0][0] + counts[0][1], counts[0][0]};
}

ClassOutcome ConfusionMatrix::incompatible_class() const {
    return ClassOutcome{counts[1][0] + counts[1][1], counts[1][1]};
}

std::array<double, 2> ConfusionMatrix::mean_per_unitary_success() const {
    std::array<double, 2> mean = {0.0, 0.0};
    if (per_unitary_success.empty()) {
        mean[0] = compatible_class().success_percent();
        mean[1] = incompatible_class().success_percent();
        return mean;
    }
    for (const auto &success : per_unitary_success) {
        mean[0] += success[0];
        mean[1] += success[1];
    }
    mean[0] /= static_cast<double>(per_unitary_success.size());
    mean[1] /= static_cast<double>(per_unitary_success.size());
    return mean;
}

std::string ConfusionMatrix::to_text() const {
    const ClassOutcome compat = compatible_class();
    const ClassOutcome incompat = incompatible_class();
    char buffer[256];
    std::string out;
    std::snprintf(buffer, sizeof(buffer), "%-12s %10s %10s   %s\n", "true \\ out", "compatible",
                  "incompatible", "success");
    out += buffer;
    std::snprintf(buffer, sizeof(buffer), "%-12s %10ld %10ld   %.1f +/- %.1f %%\n",
                  reference_label.c_str(), counts[0][0], counts[0][1], compat.success_percent(),
                  compat.std_error_percent());
    out += buffer;
    std::snprintf(buffer, sizeof(buffer), "%-12s %10ld %10ld   %.1f +/- %.1f %%\n",
                  alternative_label.c_str(), counts[1][0], counts[1][1],
                  incompat.success_percent(), incompat.std_error_percent());
    out += buffer;
    if (degenerate_trials > 0) {
        std::snprintf(buffer, sizeof(buffer), "degenerate tests: %ld\n", degenerate_trials);
        out += buffer;
    }
    return out;
}

namespace {

// Everything one unitary's trials need, built once and shared read-only.
struct UnitaryContext {
    UnitaryMatrix unitary;
    ModeOccupation input;
    std::vector<Distribution> dense; // reference [+ alternative] when exact
    const Distribution *reference_dist = nullptr;
    const Distribution *alternative_dist = nullptr;
    EventSample reference_pool;
    EventSample alternative_pool;
};

EventSample draw_model_sample(const UnitaryContext &context, const ExperimentSpec &spec,
                              ParticleModel model, const Distribution *dist, std::size_t n,
                              std::uint64_t seed) {
    switch (model) {
    case ParticleModel::Indistinguishable:
        if (dist != nullptr) {
            return brute_force_sample(*dist, n, seed);
        }
        return mcmc_sample(context.unitary, context.input, n, spec.mcmc, seed);
    case ParticleModel::Distinguishable:
        if (dist != nullptr) {
            return brute_force_sample(*dist, n, seed);
        }
        return distinguishable_sample(context.unitary, context.input, n, seed);
    case ParticleModel::MeanFieldMarginal:
        return mean_field_sample(context.unitary, context.input, n, seed);
    case ParticleModel::Uniform:
        return uniform_sample(spec.photons, spec.modes, context.input, n, seed);
    }
    throw InvalidParameterError("unknown particle model");
}

enum class TrialOutcome : unsigned char { Compatible, Incompatible, Degenerate };

TrialOutcome run_single_test(const EventSample &reference, const EventSample &candidate,
                             const ExperimentSpec &spec, std::uint64_t seed) {
    try {
        bool compatible;
        if (spec.config.voting_trials > 1) {
            compatible = majority_vote_test(reference, candidate, spec.config, spec.alpha,
                                            spec.config.voting_trials, seed)
                             .compatible;
        } else {
            compatible = compatibility_test(reference, candidate, spec.config, spec.alpha, seed)
                             .compatible;
        }
        return compatible ? TrialOutcome::Compatible : TrialOutcome::Incompatible;
    } catch (const DegenerateStructureError &) {
        return TrialOutcome::Degenerate;
    } catch (const HaltingError &) {
        return TrialOutcome::Degenerate;
    }
}

} // namespace

ConfusionMatrix run_confusion_experiment(const ExperimentSpec &spec, int jobs) {
    spec.validate();
    const ModeOccupation input = spec.resolved_input();
    const bool exact = spec.method == "exact";
    const bool alternative_needs_dense =
        exact && spec.alternative_model == ParticleModel::Distinguishable;

    std::vector<UnitaryContext> contexts;
    contexts.reserve(static_cast<std::size_t>(spec.n_unitaries));
    for (int u = 0; u < spec.n_unitaries; ++u) {
        const std::uint64_t unitary_seed = split_seed(spec.master_seed, static_cast<std::uint64_t>(u));
        UnitaryContext context{haar_random_unitary(spec.modes, unitary_seed), input, {}, nullptr,
                               nullptr, {}, {}};
        if (exact) {
            context.dense.reserve(2);
            context.dense.push_back(
                exact_distribution(context.unitary, input, spec.reference_model));
            if (alternative_needs_dense) {
                context.dense.push_back(
                    exact_distribution(context.unitary, input, spec.alternative_model));
            }
        }
        context.reference_dist = context.dense.empty() ? nullptr : &context.dense[0];
        context.alternative_dist = alternative_needs_dense ? &context.dense[1] : nullptr;
        if (spec.reshuffle_pool > 0) {
            context.reference_pool =
                draw_model_sample(context, spec, spec.reference_model, context.reference_dist,
                                  spec.reshuffle_pool, split_seed(unitary_seed, 0xA001));
            context.alternative_pool =
                draw_model_sample(context, spec, spec.alternative_model, context.alternative_dist,
                                  spec.reshuffle_pool, split_seed(unitary_seed, 0xA002));
        }
        contexts.push_back(std::move(context));
    }
    // Moving contexts may invalidate the distribution pointers; fix them up.
    for (UnitaryContext &context : contexts) {
        context.reference_dist = context.dense.empty() ? nullptr : &context.dense[0];
        context.alternative_dist = alternative_needs_dense ? &context.dense[1] : nullptr;
    }

    const long total = static_cast<long>(spec.n_unitaries) * spec.trials;
    std::vector<TrialOutcome> compatible_outcomes(static_cast<std::size_t>(total));
    std::vector<TrialOutcome> incompatible_outcomes(static_cast<std::size_t>(total));

    auto run_trial = [&](long flat) {
        const int u = static_cast<int>(flat / spec.trials);
        const int t = static_cast<int>(flat % spec.trials);
        const UnitaryContext &context = contexts[static_cast<std::size_t>(u)];
        const std::uint64_t unitary_seed = split_seed(spec.master_seed, static_cast<std::uint64_t>(u));
        const std::uint64_t trial_seed = split_seed(unitary_seed, static_cast<std::uint64_t>(t));

        EventSample reference_a, reference_b, alternative;
        if (spec.reshuffle_pool > 0) {
            reference_a = reshuffle(context.reference_pool, spec.sample_size,
                                    split_seed(trial_seed, 0));
            reference_b = reshuffle(context.reference_pool, spec.sample_size,
                                    split_seed(trial_seed, 1));
            alternative = reshuffle(context.alternative_pool, spec.sample_size,
                                    split_seed(trial_seed, 2));
        } else {
            reference_a = draw_model_sample(context, spec, spec.reference_model,
                                            context.reference_dist, spec.sample_size,
                                            split_seed(trial_seed, 0));
            reference_b = draw_model_sample(context, spec, spec.reference_model,
                                            context.reference_dist, spec.sample_size,
                                            split_seed(trial_seed, 1));
            alternative = draw_model_sample(context, spec, spec.alternative_model,
                                            context.alternative_dist, spec.sample_size,
                                            split_seed(trial_seed, 2));
        }
        compatible_outcomes[static_cast<std::size_t>(flat)] =
            run_single_test(reference_a, reference_b, spec, split_seed(trial_seed, 3));
        incompatible_outcomes[static_cast<std::size_t>(flat)] =
            run_single_test(reference_a, alternative, spec, split_seed(trial_seed, 4));
    };

    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    if (workers == 1) {
        for (long flat = 0; flat < total; ++flat) {
            run_trial(flat);
        }
    } else {
        std::atomic<long> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (long flat = cursor.fetch_add(1); flat < total; flat = cursor.fetch_add(1)) {
                    run_trial(flat);
                }
            });
        }
        for (std::thread &thread : pool) {
            thread.join();
        }
    }

    ConfusionMatrix matrix;
    matrix.reference_label = to_string(spec.reference_model);
    matrix.alternative_label = to_string(spec.alternative_model);
    matrix.per_unitary_success.resize(static_cast<std::size_t>(spec.n_unitaries));
    for (int u = 0; u < spec.n_unitaries; ++u) {
        long compat_ok = 0;
        long incompat_ok = 0;
        for (int t = 0; t < spec.trials; ++t) {
            const std::size_t flat = static_cast<std::size_t>(u) * spec.trials + t;
            const TrialOutcome compat = compatible_outcomes[flat];
            const TrialOutcome incompat = incompatible_outcomes[flat];
            if (compat == TrialOutcome::Degenerate) {
                ++matrix.degenerate_trials;
                ++matrix.counts[0][1]; // no verdict counted as a miss
            } else {
                ++matrix.counts[0][compat == TrialOutcome::Compatible ? 0 : 1];
                compat_ok += compat == TrialOutcome::Compatible ? 1 : 0;
            }
            if (incompat == TrialOutcome::Degenerate) {
                ++matrix.degenerate_trials;
                ++matrix.counts[1][0];
            } else {
                ++matrix.counts[1][incompat == TrialOutcome::Incompatible ? 1 : 0];
                incompat_ok += incompat == TrialOutcome::Incompatible ? 1 : 0;
            }
        }
        matrix.per_unitary_success[static_cast<std::size_t>(u)] = {
            100.0 * static_cast<double>(compat_ok) / static_cast<double>(spec.trials),
            100.0 * static_cast<double>(incompat_ok) / static_cast<double>(spec.trials)};
    }
    return matrix;
}

} // namespace bosonvalid
