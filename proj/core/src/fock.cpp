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

#include "bosonvalid/fock.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>

#include "bosonvalid/errors.hpp"

namespace bosonvalid {

ModeOccupation::ModeOccupation(std::vector<int> occupations)
    : occupations_(std::move(occupations)) {
    for (int count : occupations_) {
        if (count < 0) {
            throw DimensionError("mode occupation counts must be non-negative");
        }
        photons_ += count;
    }
}

ModeOccupation ModeOccupation::from_modes(std::span<const int> modes_1based, int mode_count) {
    if (mode_count < 1) {
        throw DimensionError("mode count must be positive");
    }
    std::vector<int> occupations(static_cast<std::size_t>(mode_count), 0);
    for (int mode : modes_1based) {
        if (mode < 1 || mode > mode_count) {
            throw DimensionError("occupied mode index " + std::to_string(mode) +
                                 " outside [1, " + std::to_string(mode_count) + "]");
        }
        ++occupations[static_cast<std::size_t>(mode - 1)];
    }
    return ModeOccupation(std::move(occupations));
}

ModeOccupation ModeOccupation::parse(std::string_view text, int mode_count) {
    std::vector<int> modes;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        int value = 0;
        const char *first = text.data() + pos;
        const char *last = text.data() + comma;
        while (first < last && *first == ' ') {
            ++first;
        }
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            throw IoError("cannot parse mode list \"" + std::string(text) + "\"");
        }
        modes.push_back(value);
        pos = comma + 1;
    }
    if (modes.empty()) {
        throw IoError("empty mode list");
    }
    if (!std::is_sorted(modes.begin(), modes.end())) {
        throw IoError("mode list must be ascending: \"" + std::string(text) + "\"");
    }
    return from_modes(modes, mode_count);
}

bool ModeOccupation::collision_free() const {
    return std::all_of(occupations_.begin(), occupations_.end(),
                       [](int count) { return count <= 1; });
}

std::vector<int> ModeOccupation::occupied_modes() const {
    std::vector<int> modes;
    modes.reserve(static_cast<std::size_t>(photons_));
    for (int i = 0; i < mode_count(); ++i) {
        for (int rep = 0; rep < occupations_[static_cast<std::size_t>(i)]; ++rep) {
            modes.push_back(i + 1);
        }
    }
    return modes;
}

std::vector<int> ModeOccupation::occupied_modes_zero_based() const {
    std::vector<int> modes = occupied_modes();
    for (int &mode : modes) {
        --mode;
    }
    return modes;
}

std::string ModeOccupation::to_string() const {
    std::string out;
    for (int mode : occupied_modes()) {
        if (!out.empty()) {
            out += ',';
        }
        out += std::to_string(mode);
    }
    return out;
}

bool state_order_less(const ModeOccupation &a, const ModeOccupation &b) {
    const std::vector<int> ta = a.occupied_modes();
    const std::vector<int> tb = b.occupied_modes();
    return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > UINT64_MAX) {
            throw CapacityError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

std::uint64_t collision_free_dimension(int photons, int modes) {
    if (photons < 1) {
        throw DimensionError("photon count must be at least 1");
    }
    if (photons > modes) {
        throw DimensionError("photon count " + std::to_string(photons) +
                             " exceeds mode count " + std::to_string(modes));
    }
    return binomial(modes, photons);
}

namespace {

// Advances a sorted 0-based k-subset of {0..n-1} to its lexicographic
// successor; returns false past the last subset.
bool next_combination(std::span<int> modes, int n) {
    const int k = static_cast<int>(modes.size());
    int i = k - 1;
    while (i >= 0 && modes[static_cast<std::size_t>(i)] == n - k + i) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++modes[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
        modes[static_cast<std::size_t>(j)] = modes[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
}

ModeOccupation occupation_from_zero_based(std::span<const int> modes, int mode_count) {
    std::vector<int> occupations(static_cast<std::size_t>(mode_count), 0);
    for (int mode : modes) {
        ++occupations[static_cast<std::size_t>(mode)];
    }
    return ModeOccupation(std::move(occupations));
}

} // namespace

std::vector<ModeOccupation> enumerate_collision_free(int photons, int modes) {
    const std::uint64_t dim = collision_free_dimension(photons, modes);
    std::vector<ModeOccupation> states;
    states.reserve(dim);
    for_each_collision_free(photons, modes, [&](std::span<const int> occupied) {
        states.push_back(occupation_from_zero_based(occupied, modes));
    });
    return states;
}

void for_each_collision_free(int photons, int modes,
                             const std::function<void(std::span<const int>)> &visit) {
    collision_free_dimension(photons, modes);
    std::vector<int> current(static_cast<std::size_t>(photons));
    std::iota(current.begin(), current.end(), 0);
    do {
        visit(current);
    } while (next_combination(current, modes));
}

HilbertIndex rank(const ModeOccupation &state) {
    if (!state.collision_free()) {
        throw UnsupportedStateError("rank is defined on collision-free states only, got " +
                                    state.to_string());
    }
    const int photons = state.photon_count();
    const int modes = state.mode_count();
    collision_free_dimension(photons, modes);
    const std::vector<int> occupied = state.occupied_modes_zero_based();
    std::uint64_t index = 0;
    int prev = -1;
    for (int i = 0; i < photons; ++i) {
        for (int mode = prev + 1; mode < occupied[static_cast<std::size_t>(i)]; ++mode) {
            index += binomial(modes - 1 - mode, photons - 1 - i);
        }
        prev = occupied[static_cast<std::size_t>(i)];
    }
    return HilbertIndex{index, HilbertDims{photons, modes}};
}

ModeOccupation unrank(const HilbertIndex &index) {
    const int photons = index.dims.photons;
    const int modes = index.dims.modes;
    const std::uint64_t dim = collision_free_dimension(photons, modes);
    if (index.index >= dim) {
        throw DimensionError("state index " + std::to_string(index.index) +
                             " outside the (N=" + std::to_string(photons) +
                             ", m=" + std::to_string(modes) + ") subspace");
    }
    std::vector<int> occupied(static_cast<std::size_t>(photons));
    std::uint64_t remaining = index.index;
    int mode = 0;
    for (int i = 0; i < photons; ++i) {
        while (true) {
            const std::uint64_t block = binomial(modes - 1 - mode, photons - 1 - i);
            if (remaining < block) {
                break;
            }
            remaining -= block;
            ++mode;
        }
        occupied[static_cast<std::size_t>(i)] = mode;
        ++mode;
    }
    return occupation_from_zero_based(occupied, modes);
}

std::string to_string(Metric metric) {
    return metric == Metric::L1 ? "L1" : "L2";
}

Metric metric_from_string(std::string_view text) {
    if (text == "L1" || text == "l1" || text == "1") {
        return Metric::L1;
    }
    if (text == "L2" || text == "l2" || text == "2") {
        return Metric::L2;
    }
    throw InvalidParameterError("unknown metric \"" + std::string(text) + "\"");
}

double distance(const ModeOccupation &a, const ModeOccupation &b, Metric metric) {
    if (a.mode_count() != b.mode_count()) {
        throw DimensionError("distance between states with different mode counts (" +
                             std::to_string(a.mode_count()) + " vs " +
                             std::to_string(b.mode_count()) + ")");
    }
    const std::vector<int> &pa = a.occupations();
    const std::vector<int> &pb = b.occupations();
    if (metric == Metric::L1) {
        long total = 0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            total += std::abs(pa[i] - pb[i]);
        }
        return static_cast<double>(total);
    }
    long total = 0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const long diff = pa[i] - pb[i];
        total += diff * diff;
    }
    return std::sqrt(static_cast<double>(total));
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
    if (a.size() != b.size()) {
        throw DimensionError("distance between points of different dimension");
    }
    double total = 0.0;
    if (metric == Metric::L1) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            total += std::abs(a[i] - b[i]);
        }
        return total;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        total += diff * diff;
    }
    return std::sqrt(total);
}

} // namespace bosonvalid
