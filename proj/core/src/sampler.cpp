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

#include "bosonvalid/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "bosonvalid/errors.hpp"
#include "bosonvalid/permanent.hpp"

namespace bosonvalid {

std::string to_string(ParticleModel model) {
    switch (model) {
    case ParticleModel::Indistinguishable:
        return "ind";
    case ParticleModel::Distinguishable:
        return "dis";
    case ParticleModel::MeanFieldMarginal:
        return "mf";
    case ParticleModel::Uniform:
        return "unif";
    }
    return "ind";
}

ParticleModel particle_model_from_string(std::string_view text) {
    if (text == "ind" || text == "indistinguishable") {
        return ParticleModel::Indistinguishable;
    }
    if (text == "dis" || text == "distinguishable") {
        return ParticleModel::Distinguishable;
    }
    if (text == "mf" || text == "mean-field" || text == "mean-field-marginal") {
        return ParticleModel::MeanFieldMarginal;
    }
    if (text == "unif" || text == "uniform") {
        return ParticleModel::Uniform;
    }
    throw InvalidParameterError("unknown particle model \"" + std::string(text) + "\"");
}

Distribution::Distribution(std::vector<double> probabilities, HilbertDims dims,
                           ParticleModel model, ModeOccupation input)
    : probabilities_(std::move(probabilities)), dims_(dims), model_(model),
      input_(std::move(input)) {
    if (probabilities_.size() != collision_free_dimension(dims_.photons, dims_.modes)) {
        throw DimensionError("probability vector length does not match C(m, N)");
    }
    double sum = 0.0;
    for (double p : probabilities_) {
        if (p < 0.0) {
            throw InvalidParameterError("distribution entries must be non-negative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidParameterError("distribution must sum to 1, got " + std::to_string(sum));
    }
}

void EventSample::validate() const {
    const int n = photons();
    const int m = modes();
    for (const ModeOccupation &event : events) {
        if (event.mode_count() != m || event.photon_count() != n) {
            throw DimensionError("sample event " + event.to_string() +
                                 " does not match the sample dimensions");
        }
        if (!event.collision_free()) {
            throw UnsupportedStateError("sample contains collision event " + event.to_string());
        }
    }
}

namespace {

void require_collision_free(const ModeOccupation &state, const char *role) {
    if (!state.collision_free()) {
        throw UnsupportedStateError(std::string(role) + " state " + state.to_string() +
                                    " has multiply-occupied modes");
    }
}

void require_same_shape(const UnitaryMatrix &unitary, const ModeOccupation &input,
                        const ModeOccupation &output) {
    if (input.mode_count() != unitary.modes() || output.mode_count() != unitary.modes()) {
        throw DimensionError("input/output mode counts do not match the unitary");
    }
    if (input.photon_count() != output.photon_count()) {
        throw DimensionError("input and output photon numbers differ");
    }
}

// U_{S,T}: columns picked by the input modes, rows by the output modes,
// both with repetition for multiply-occupied modes.
Eigen::MatrixXcd scattering_submatrix(const Eigen::MatrixXcd &unitary,
                                      std::span<const int> input_modes,
                                      std::span<const int> output_modes) {
    const int n = static_cast<int>(input_modes.size());
    Eigen::MatrixXcd sub(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            sub(a, b) = unitary(output_modes[static_cast<std::size_t>(a)],
                                input_modes[static_cast<std::size_t>(b)]);
        }
    }
    return sub;
}

double model_probability(const Eigen::MatrixXcd &sub, ParticleModel model) {
    if (model == ParticleModel::Indistinguishable) {
        return std::norm(permanent(sub));
    }
    if (model == ParticleModel::Distinguishable) {
        return permanent(Eigen::MatrixXd(sub.cwiseAbs2()));
    }
    throw InvalidParameterError("transition probabilities are defined for the "
                                "indistinguishable and distinguishable models only");
}

} // namespace

double transition_probability(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              const ModeOccupation &output, ParticleModel model) {
    require_same_shape(unitary, input, output);
    require_collision_free(input, "input");
    require_collision_free(output, "output");
    const std::vector<int> in_modes = input.occupied_modes_zero_based();
    const std::vector<int> out_modes = output.occupied_modes_zero_based();
    return model_probability(scattering_submatrix(unitary.entries(), in_modes, out_modes), model);
}

double full_space_probability(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              const ModeOccupation &output, ParticleModel model) {
    require_same_shape(unitary, input, output);
    require_collision_free(input, "input");
    const std::vector<int> in_modes = input.occupied_modes_zero_based();
    const std::vector<int> out_modes = output.occupied_modes_zero_based();
    double factorials = 1.0;
    for (int count : output.occupations()) {
        for (int i = 2; i <= count; ++i) {
            factorials *= i;
        }
    }
    return model_probability(scattering_submatrix(unitary.entries(), in_modes, out_modes), model) /
           factorials;
}

Distribution exact_distribution(const UnitaryMatrix &unitary, const ModeOccupation &input,
                                ParticleModel model, std::uint64_t capacity_guard) {
    const int photons = input.photon_count();
    const int modes = input.mode_count();
    const std::uint64_t dim = collision_free_dimension(photons, modes);
    if (dim > capacity_guard) {
        throw CapacityError("collision-free dimension " + std::to_string(dim) +
                            " exceeds the dense guard (" + std::to_string(capacity_guard) +
                            "); use the MCMC sampler instead");
    }
    if (model == ParticleModel::Uniform) {
        std::vector<double> probabilities(dim, 1.0 / static_cast<double>(dim));
        return Distribution(std::move(probabilities), HilbertDims{photons, modes}, model, input);
    }
    if (model != ParticleModel::Indistinguishable && model != ParticleModel::Distinguishable) {
        throw InvalidParameterError("exact distributions exist for the ind, dis and unif models");
    }
    require_collision_free(input, "input");
    if (modes != unitary.modes()) {
        throw DimensionError("input mode count does not match the unitary");
    }
    const std::vector<int> in_modes = input.occupied_modes_zero_based();

    // Dense N x m slice of the columns actually used, so the per-output
    // submatrix fill is contiguous.
    Eigen::MatrixXcd columns(modes, photons);
    for (int b = 0; b < photons; ++b) {
        columns.col(b) = unitary.entries().col(in_modes[static_cast<std::size_t>(b)]);
    }
    const bool indistinguishable = model == ParticleModel::Indistinguishable;
    Eigen::MatrixXd columns_abs2;
    if (!indistinguishable) {
        columns_abs2 = columns.cwiseAbs2();
    }

    std::vector<double> probabilities(dim);
    Eigen::MatrixXcd sub(photons, photons);
    Eigen::MatrixXd sub_real(photons, photons);
    std::uint64_t index = 0;
    for_each_collision_free(photons, modes, [&](std::span<const int> out_modes) {
        double value;
        if (indistinguishable) {
            for (int a = 0; a < photons; ++a) {
                sub.row(a) = columns.row(out_modes[static_cast<std::size_t>(a)]);
            }
            value = std::norm(permanent(sub));
        } else {
            for (int a = 0; a < photons; ++a) {
                sub_real.row(a) = columns_abs2.row(out_modes[static_cast<std::size_t>(a)]);
            }
            value = permanent(sub_real);
        }
        probabilities[index++] = value;
    });
    const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (total <= 0.0) {
        throw InvalidParameterError("all collision-free outputs have zero probability");
    }
    for (double &p : probabilities) {
        p /= total;
    }
    return Distribution(std::move(probabilities), HilbertDims{photons, modes}, model, input);
}

EventSample brute_force_sample(const Distribution &distribution, std::size_t n_events,
                               std::uint64_t seed) {
    Rng rng(seed);
    const DiscreteSampler sampler(distribution.probabilities());
    const HilbertDims dims = distribution.dims();

    EventSample sample;
    sample.input_state = distribution.input();
    sample.model = distribution.model();
    sample.seed = seed;
    sample.events.reserve(n_events);

    // Unranking is cheap but a lookup table pays off for large draws from
    // small spaces.
    if (distribution.size() <= (1u << 20)) {
        const std::vector<ModeOccupation> states =
            enumerate_collision_free(dims.photons, dims.modes);
        for (std::size_t i = 0; i < n_events; ++i) {
            sample.events.push_back(states[sampler.draw(rng)]);
        }
    } else {
        for (std::size_t i = 0; i < n_events; ++i) {
            sample.events.push_back(unrank(HilbertIndex{sampler.draw(rng), dims}));
        }
    }
    return sample;
}

namespace {

// Per-particle output CDFs |U_{i, j_k}|^2 for the occupied input modes.
std::vector<std::vector<double>> particle_output_cdfs(const UnitaryMatrix &unitary,
                                                      std::span<const int> in_modes) {
    const int modes = unitary.modes();
    std::vector<std::vector<double>> cdfs;
    cdfs.reserve(in_modes.size());
    for (int j : in_modes) {
        std::vector<double> cdf(static_cast<std::size_t>(modes));
        double acc = 0.0;
        for (int i = 0; i < modes; ++i) {
            acc += std::norm(unitary.entries()(i, j));
            cdf[static_cast<std::size_t>(i)] = acc;
        }
        cdfs.push_back(std::move(cdf));
    }
    return cdfs;
}

// One collision-free distinguishable event: independent per-particle
// draws, redrawn until all output modes are distinct.
ModeOccupation draw_distinguishable_event(const std::vector<std::vector<double>> &cdfs,
                                          int modes, Rng &rng, std::vector<int> &scratch) {
    const int photons = static_cast<int>(cdfs.size());
    while (true) {
        scratch.clear();
        for (int k = 0; k < photons; ++k) {
            scratch.push_back(static_cast<int>(rng.draw_cdf(cdfs[static_cast<std::size_t>(k)])));
        }
        std::sort(scratch.begin(), scratch.end());
        if (std::adjacent_find(scratch.begin(), scratch.end()) == scratch.end()) {
            std::vector<int> occupations(static_cast<std::size_t>(modes), 0);
            for (int mode : scratch) {
                occupations[static_cast<std::size_t>(mode)] = 1;
            }
            return ModeOccupation(std::move(occupations));
        }
    }
}

} // namespace

EventSample distinguishable_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                                   std::size_t n_events, std::uint64_t seed) {
    require_collision_free(input, "input");
    if (input.mode_count() != unitary.modes()) {
        throw DimensionError("input mode count does not match the unitary");
    }
    Rng rng(seed);
    const std::vector<int> in_modes = input.occupied_modes_zero_based();
    const auto cdfs = particle_output_cdfs(unitary, in_modes);

    EventSample sample;
    sample.input_state = input;
    sample.model = ParticleModel::Distinguishable;
    sample.seed = seed;
    sample.events.reserve(n_events);
    std::vector<int> scratch;
    for (std::size_t i = 0; i < n_events; ++i) {
        sample.events.push_back(draw_distinguishable_event(cdfs, unitary.modes(), rng, scratch));
    }
    return sample;
}

EventSample uniform_sample(int photons, int modes, const ModeOccupation &input,
                           std::size_t n_events, std::uint64_t seed) {
    const std::uint64_t dim = collision_free_dimension(photons, modes);
    Rng rng(seed);
    EventSample sample;
    sample.input_state = input;
    sample.model = ParticleModel::Uniform;
    sample.seed = seed;
    sample.events.reserve(n_events);
    for (std::size_t i = 0; i < n_events; ++i) {
        sample.events.push_back(unrank(HilbertIndex{rng.uniform_index(dim), {photons, modes}}));
    }
    return sample;
}

namespace {

// Chain state with its unnormalized target and proposal weights, so the
// acceptance test never recomputes permanents for the resident state.
struct ChainState {
    ModeOccupation state;
    double target = 0.0;
    double proposal = 0.0;
};

} // namespace

EventSample mcmc_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                        std::size_t n_events, const McmcOptions &options, std::uint64_t seed,
                        McmcStats *stats) {
    require_collision_free(input, "input");
    if (input.mode_count() != unitary.modes()) {
        throw DimensionError("input mode count does not match the unitary");
    }
    if (options.burn_in < 0 || options.thin < 1) {
        throw InvalidParameterError("burn_in must be >= 0 and thin >= 1");
    }
    Rng rng(seed);
    const std::vector<int> in_modes = input.occupied_modes_zero_based();
    const auto cdfs = particle_output_cdfs(unitary, in_modes);
    const Eigen::MatrixXcd &entries = unitary.entries();
    const bool hook_distinguishable_target = options.target == ParticleModel::Distinguishable;

    auto weigh = [&](const ModeOccupation &state) {
        const std::vector<int> out_modes = state.occupied_modes_zero_based();
        const Eigen::MatrixXcd sub = scattering_submatrix(entries, in_modes, out_modes);
        const double proposal = permanent(Eigen::MatrixXd(sub.cwiseAbs2()));
        const double target = hook_distinguishable_target ? proposal : std::norm(permanent(sub));
        return std::pair<double, double>(target, proposal);
    };

    std::vector<int> scratch;
    auto propose = [&](Rng &r) {
        ChainState next;
        next.state = draw_distinguishable_event(cdfs, unitary.modes(), r, scratch);
        std::tie(next.target, next.proposal) = weigh(next.state);
        return next;
    };

    // Initial state from the proposal; retry (bounded) if it lands on a
    // zero-probability output.
    ChainState initial;
    constexpr int kInitRetries = 1000;
    for (int attempt = 0;; ++attempt) {
        initial = propose(rng);
        if (initial.target > 0.0) {
            break;
        }
        if (attempt >= kInitRetries) {
            throw Error("could not find a positive-probability initial state for the chain");
        }
    }

    McmcStats local;
    std::vector<ChainState> kept = independence_mcmc(
        std::move(initial), propose, [](const ChainState &s) { return s.target; },
        [](const ChainState &s) { return s.proposal; }, n_events, options.burn_in, options.thin,
        rng, &local);
    if (stats != nullptr) {
        *stats = local;
    }

    EventSample sample;
    sample.input_state = input;
    sample.model = ParticleModel::Indistinguishable;
    sample.seed = seed;
    sample.source = "mcmc";
    sample.events.reserve(kept.size());
    for (ChainState &state : kept) {
        sample.events.push_back(std::move(state.state));
    }
    return sample;
}

std::vector<double> mean_field_single_particle_law(const UnitaryMatrix &unitary,
                                                   const ModeOccupation &input,
                                                   std::span<const double> phases) {
    require_collision_free(input, "input");
    const std::vector<int> in_modes = input.occupied_modes_zero_based();
    if (phases.size() != in_modes.size()) {
        throw DimensionError("one phase per input photon required");
    }
    const int modes = unitary.modes();
    const int photons = static_cast<int>(in_modes.size());
    std::vector<std::complex<double>> rotations(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
        rotations[k] = std::polar(1.0, phases[k]);
    }
    std::vector<double> law(static_cast<std::size_t>(modes));
    for (int i = 0; i < modes; ++i) {
        std::complex<double> amplitude = 0.0;
        for (int k = 0; k < photons; ++k) {
            amplitude += rotations[static_cast<std::size_t>(k)] *
                         unitary.entries()(i, in_modes[static_cast<std::size_t>(k)]);
        }
        law[static_cast<std::size_t>(i)] = std::norm(amplitude) / photons;
    }
    return law;
}

EventSample mean_field_sample(const UnitaryMatrix &unitary, const ModeOccupation &input,
                              std::size_t n_events, std::uint64_t seed) {
    require_collision_free(input, "input");
    if (input.mode_count() != unitary.modes()) {
        throw DimensionError("input mode count does not match the unitary");
    }
    Rng rng(seed);
    const int photons = input.photon_count();
    const int modes = unitary.modes();

    EventSample sample;
    sample.input_state = input;
    sample.model = ParticleModel::MeanFieldMarginal;
    sample.seed = seed;
    sample.events.reserve(n_events);

    std::vector<double> phases(static_cast<std::size_t>(photons));
    std::vector<double> cdf(static_cast<std::size_t>(modes));
    std::vector<int> drawn;
    while (sample.events.size() < n_events) {
        for (double &phase : phases) {
            phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        const std::vector<double> law = mean_field_single_particle_law(unitary, input, phases);
        double acc = 0.0;
        for (int i = 0; i < modes; ++i) {
            acc += law[static_cast<std::size_t>(i)];
            cdf[static_cast<std::size_t>(i)] = acc;
        }
        drawn.clear();
        for (int k = 0; k < photons; ++k) {
            drawn.push_back(static_cast<int>(rng.draw_cdf(cdf)));
        }
        std::sort(drawn.begin(), drawn.end());
        if (std::adjacent_find(drawn.begin(), drawn.end()) != drawn.end()) {
            continue; // collision: redraw the event with fresh phases
        }
        std::vector<int> occupations(static_cast<std::size_t>(modes), 0);
        for (int mode : drawn) {
            occupations[static_cast<std::size_t>(mode)] = 1;
        }
        sample.events.emplace_back(std::move(occupations));
    }
    return sample;
}

double total_variation_distance(const Distribution &p, const Distribution &q) {
    if (p.dims() != q.dims()) {
        throw DimensionError("total variation distance requires matching (N, m)");
    }
    double total = 0.0;
    for (std::uint64_t i = 0; i < p.size(); ++i) {
        total += std::abs(p.at(i) - q.at(i));
    }
    return 0.5 * total;
}

Distribution empirical_distribution(const EventSample &sample, std::uint64_t capacity_guard) {
    sample.validate();
    if (sample.events.empty()) {
        throw InvalidParameterError("cannot build an empirical distribution from an empty sample");
    }
    const std::uint64_t dim = collision_free_dimension(sample.photons(), sample.modes());
    if (dim > capacity_guard) {
        throw CapacityError("collision-free dimension " + std::to_string(dim) +
                            " exceeds the dense guard for empirical distributions");
    }
    std::vector<double> probabilities(dim, 0.0);
    const double weight = 1.0 / static_cast<double>(sample.events.size());
    for (const ModeOccupation &event : sample.events) {
        probabilities[rank(event).index] += weight;
    }
    return Distribution(std::move(probabilities), HilbertDims{sample.photons(), sample.modes()},
                        sample.model, sample.input_state);
}

} // namespace bosonvalid
