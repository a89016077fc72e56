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

#ifndef BOSONVALID_FOCK_HPP
#define BOSONVALID_FOCK_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bosonvalid {

/// An input or output configuration of bosons over m modes, stored as the
/// per-mode occupation count. Collision states (some count > 1) are
/// representable; collision-freeness is a checked property.
class ModeOccupation {
  public:
    ModeOccupation() = default;

    /// Takes the per-mode boson counts. All entries must be non-negative.
    explicit ModeOccupation(std::vector<int> occupations);

    /// Builds from 1-based occupied mode indices (ascending, repeats allowed
    /// for collision states), e.g. {6,7,8} with m=13.
    static ModeOccupation from_modes(std::span<const int> modes_1based, int mode_count);

    /// Parses the textual form "6,7,8" (1-based, ascending occupied modes).
    static ModeOccupation parse(std::string_view text, int mode_count);

    int mode_count() const { return static_cast<int>(occupations_.size()); }
    int photon_count() const { return photons_; }
    bool collision_free() const;
    const std::vector<int> &occupations() const { return occupations_; }
    int occupation(int mode) const { return occupations_[static_cast<std::size_t>(mode)]; }

    /// Occupied mode indices, 1-based ascending, one entry per boson.
    std::vector<int> occupied_modes() const;
    /// Occupied mode indices, 0-based ascending, one entry per boson.
    std::vector<int> occupied_modes_zero_based() const;

    /// Textual form: comma-separated 1-based occupied modes, ascending.
    std::string to_string() const;

    bool operator==(const ModeOccupation &other) const = default;

  private:
    std::vector<int> occupations_;
    int photons_ = 0;
};

/// Enumeration order on states: lexicographic on the (ascending) occupied
/// mode tuples, so (1,2,3) comes first and (m-2,m-1,m) last.
bool state_order_less(const ModeOccupation &a, const ModeOccupation &b);

/// Dense index of a collision-free state within the (N, m) subspace.
struct HilbertDims {
    int photons = 0;
    int modes = 0;
    bool operator==(const HilbertDims &) const = default;
};

struct HilbertIndex {
    std::uint64_t index = 0;
    HilbertDims dims;
    bool operator==(const HilbertIndex &) const = default;
};

/// C(n, k); throws CapacityError if the value overflows 64 bits.
std::uint64_t binomial(int n, int k);

/// Dimension of the collision-free subspace, C(m, N).
/// Throws DimensionError unless 1 <= N <= m.
std::uint64_t collision_free_dimension(int photons, int modes);

/// All C(m, N) collision-free states in enumeration order.
std::vector<ModeOccupation> enumerate_collision_free(int photons, int modes);

/// Streaming variant of enumerate_collision_free; visits states in the same
/// order without materializing the list. The span holds the 0-based occupied
/// modes of the current state and is only valid during the call.
void for_each_collision_free(int photons, int modes,
                             const std::function<void(std::span<const int>)> &visit);

/// Position of a collision-free state in enumeration order.
/// Throws UnsupportedStateError for collision states.
HilbertIndex rank(const ModeOccupation &state);

/// Inverse of rank.
ModeOccupation unrank(const HilbertIndex &index);

enum class Metric { L1, L2 };

std::string to_string(Metric metric);
Metric metric_from_string(std::string_view text);

/// d(a, b) on occupation vectors: L1 = sum |a_i - b_i|,
/// L2 = sqrt(sum (a_i - b_i)^2). Throws DimensionError on mismatched m.
double distance(const ModeOccupation &a, const ModeOccupation &b, Metric metric);

/// Same metrics on real-valued points (cluster centroids).
double distance(std::span<const double> a, std::span<const double> b, Metric metric);

} // namespace bosonvalid

#endif // BOSONVALID_FOCK_HPP
