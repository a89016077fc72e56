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

#ifndef BOSONVALID_SAMPLER_HPP
#define BOSONVALID_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bosonvalid/fock.hpp"
#include "bosonvalid/rng.hpp"
#include "bosonvalid/unitary.hpp"

namespace bosonvalid {

enum class ParticleModel { Indistinguishable, Distinguishable, MeanFieldMarginal, Uniform };

std::string to_string(ParticleModel model);
ParticleModel particle_model_from_string(std::string_view text);

/// Default guard on the collision-free dimension for dense probability
/// vectors; larger spaces must go through the MCMC sampler.
inline constexpr std::uint64_t kDenseCapacityGuard = 10'000'000;

/// Probability vector over the collision-free (N, m) subspace, indexed by
/// enumeration rank and normalized to sum 1.
class Distribution {
  public:
    Distribution(std::vector<double> probabilities, HilbertDims dims, ParticleModel model,
                 ModeOccupation input);

    const std::vector<double> &probabilities() const { return probabilities_; }
    double at(std::uint64_t rank) const { return probabilities_[rank]; }
    std::uint64_t size() const { return probabilities_.size(); }
    HilbertDims dims() const { return dims_; }
    ParticleModel model() const { return model_; }
    const ModeOccupation &input() const { return input_; }

  private:
    std::vector<double> probabilities_;
    HilbertDims dims_;
    ParticleModel model_;
    ModeOccupation input_;
};

/// An ordered multiset of observed output states plus provenance.
struct EventSample {
    std::vector<ModeOccupation> events;
    ModeOccupation input_state;
    ParticleModel model = ParticleModel::Indistinguishable;
    std::uint64_t seed = 0;
    std::string source;

    int photons() const { return input_state.photon_count(); }
    int modes() const { return input_state.mode_count(); }

    /// Checks that every event is collision-free with the sample's (N, m).
    void validate() const;
};

/// Single input -> output probability for collision-free states.
/// Indistinguishable: |per(U_ST)|^2. Distinguishable: per of the
/// elementwise |.|^2 submatrix. Factorials are all 1 in this subspace.
double transition_probability(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              const ModeOccupation &output, ParticleModel model);

/// Full-Fock-space probability: the output may have collisions, in which
/// case rows repeat and the t_i! factors apply. Input must stay
/// collision-free. Summed over all outputs with sum(t) = N this is 1.
double full_space_probability(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              const ModeOccupation &output, ParticleModel model);

/// Dense output distribution over the collision-free subspace, renormalized
/// to sum 1 (the physical vector loses the collision mass). Supported
/// models: Indistinguishable, Distinguishable, Uniform.
Distribution exact_distribution(const UnitaryMatrix &unitary, const ModeOccupation &input,
                                ParticleModel model,
                                std::uint64_t capacity_guard = kDenseCapacityGuard);

/// I.i.d. draws from a dense distribution via inverse CDF.
EventSample brute_force_sample(const Distribution &distribution, std::size_t n_events,
                               std::uint64_t seed);

/// Direct distinguishable-particle sampler: each particle exits
/// independently with law |U_{i,j}|^2; collision events are redrawn.
/// No permanents involved, so it scales to any (N, m).
EventSample distinguishable_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                                   std::size_t n_events, std::uint64_t seed);

/// Uniform sampler over the collision-free subspace (uniform rank unrank).
EventSample uniform_sample(int photons, int modes, const ModeOccupation &input,
                           std::size_t n_events, std::uint64_t seed);

struct McmcOptions {
    int burn_in = 100;
    int thin = 100;
    /// Test hook: targeting Distinguishable makes the proposal equal the
    /// target, so every step must be accepted.
    ParticleModel target = ParticleModel::Indistinguishable;
};

struct McmcStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    double acceptance_rate() const {
        return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
    }
};

/// Metropolised independence sampler targeting the indistinguishable
/// distribution with the distinguishable distribution as proposal;
/// acceptance ratio min(1, P(y)Q(x) / (P(x)Q(y))) on unnormalized
/// collision-free weights. Keeps every thin-th state after burn_in.
EventSample mcmc_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                        std::size_t n_events, const McmcOptions &options, std::uint64_t seed,
                        McmcStats *stats = nullptr);

/// Single-particle law of the mean-field sampler for fixed phases:
/// p(i) = (1/N) |sum_k exp(i theta_k) U_{i, j_k}|^2. Sums to 1 by column
/// unitarity.
std::vector<double> mean_field_single_particle_law(const UnitaryMatrix &unitary,
                                                   const ModeOccupation &input,
                                                   std::span<const double> phases);

/// Mean-field sampler: per event draw N uniform phases, then N particles
/// i.i.d. from the single-particle law; events with collisions are redrawn
/// with fresh phases (post-selection on the collision-free subspace).
EventSample mean_field_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              std::size_t n_events, std::uint64_t seed);

/// 1/2 sum |p_i - q_i| over a shared index space.
double total_variation_distance(const Distribution &p, const Distribution &q);

/// Empirical distribution of a sample on the dense collision-free index
/// space (for TVD convergence checks).
Distribution empirical_distribution(const EventSample &sample,
                                    std::uint64_t capacity_guard = kDenseCapacityGuard);

/// Generic Metropolis independence chain; exposed so the acceptance rule
/// can be exercised on toy targets. Returns the kept states.
template <typename State, typename ProposeFn, typename TargetWeightFn, typename ProposalWeightFn>
std::vector<State> independence_mcmc(State initial, ProposeFn &&propose,
                                     TargetWeightFn &&target_weight,
                                     ProposalWeightFn &&proposal_weight, std::size_t n_keep,
                                     int burn_in, int thin, Rng &rng, McmcStats *stats = nullptr) {
    std::vector<State> kept;
    kept.reserve(n_keep);
    State current = std::move(initial);
    double target_current = target_weight(current);
    double proposal_current = proposal_weight(current);
    McmcStats local;
    const std::uint64_t total_steps =
        static_cast<std::uint64_t>(burn_in) + static_cast<std::uint64_t>(n_keep) * thin;
    for (std::uint64_t step = 1; step <= total_steps && kept.size() < n_keep; ++step) {
        State candidate = propose(rng);
        const double target_candidate = target_weight(candidate);
        const double proposal_candidate = proposal_weight(candidate);
        ++local.proposals;
        // min(1, [P(y) Q(x)] / [P(x) Q(y)]) without forming the ratio when
        // the current state has zero weight.
        const double numerator = target_candidate * proposal_current;
        const double denominator = target_current * proposal_candidate;
        if (denominator <= 0.0 || rng.uniform() * denominator < numerator) {
            current = std::move(candidate);
            target_current = target_candidate;
            proposal_current = proposal_candidate;
            ++local.accepted;
        }
        if (step > static_cast<std::uint64_t>(burn_in) &&
            (step - static_cast<std::uint64_t>(burn_in)) % thin == 0) {
            kept.push_back(current);
        }
    }
    if (stats != nullptr) {
        *stats = local;
    }
    return kept;
}

} // namespace bosonvalid

#endif // BOSONVALID_SAMPLER_HPP
