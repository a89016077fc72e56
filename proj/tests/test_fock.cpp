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

#include "bosonvalid/errors.hpp"
#include "bosonvalid/fock.hpp"
#include "bosonvalid/rng.hpp"
#include "test_util.hpp"

using namespace bosonvalid;

TEST_CASE("enumeration covers the collision-free subspace in order") {
    const std::vector<ModeOccupation> states = enumerate_collision_free(3, 13);
    CHECK(states.size() == 286);
    for (const ModeOccupation &state : states) {
        CHECK(state.collision_free());
        CHECK(state.photon_count() == 3);
        CHECK(state.mode_count() == 13);
    }
    CHECK(states.front().occupied_modes() == std::vector<int>{1, 2, 3});
    CHECK(states.back().occupied_modes() == std::vector<int>{11, 12, 13});
    for (std::size_t i = 1; i < states.size(); ++i) {
        CHECK(state_order_less(states[i - 1], states[i]));
    }
}

TEST_CASE("single photon enumeration is the one-hot basis") {
    const std::vector<ModeOccupation> states = enumerate_collision_free(1, 4);
    REQUIRE(states.size() == 4);
    for (int i = 0; i < 4; ++i) {
        std::vector<int> expected(4, 0);
        expected[static_cast<std::size_t>(i)] = 1;
        CHECK(states[static_cast<std::size_t>(i)].occupations() == expected);
    }
}

TEST_CASE("large enumerations match the Pascal-triangle count") {
    // (5, 50) streamed: 2,118,760 states.
    std::uint64_t count = 0;
    for_each_collision_free(5, 50, [&](std::span<const int>) { ++count; });
    CHECK(count == test::pascal_binomial(50, 5));
    CHECK(count == 2'118'760);
}

TEST_CASE("enumeration size equals C(m, N) exhaustively up to 16 modes") {
    for (int m = 1; m <= 16; ++m) {
        for (int n = 1; n <= m; ++n) {
            CHECK(collision_free_dimension(n, m) == test::pascal_binomial(m, n));
            CHECK(enumerate_collision_free(n, m).size() == test::pascal_binomial(m, n));
        }
    }
}

TEST_CASE("dimension guards") {
    CHECK_THROWS_AS(collision_free_dimension(5, 4), DimensionError);
    CHECK_THROWS_AS(collision_free_dimension(0, 4), DimensionError);
    CHECK_THROWS_AS(enumerate_collision_free(14, 13), DimensionError);
}

TEST_CASE("rank endpoints and round trip") {
    const std::vector<ModeOccupation> states = enumerate_collision_free(3, 13);
    CHECK(rank(states.front()).index == 0);
    CHECK(rank(states.back()).index == 285);
    for (std::uint64_t i = 0; i < states.size(); ++i) {
        const HilbertIndex index = rank(states[i]);
        CHECK(index.index == i);
        CHECK(unrank(index) == states[i]);
    }
}

TEST_CASE("rank rejects collision states") {
    const ModeOccupation collision(std::vector<int>{2, 1, 0, 0});
    CHECK_FALSE(collision.collision_free());
    CHECK_THROWS_AS(rank(collision), UnsupportedStateError);
}

TEST_CASE("distance basics") {
    const ModeOccupation a = ModeOccupation::parse("1,2", 4);
    const ModeOccupation b = ModeOccupation::parse("1,3", 4);
    CHECK(distance(a, a, Metric::L1) == 0.0);
    CHECK(distance(a, a, Metric::L2) == 0.0);
    CHECK(distance(a, b, Metric::L1) == 2.0);
    CHECK(distance(a, b, Metric::L2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance(b, a, Metric::L1) == distance(a, b, Metric::L1));

    const ModeOccupation c = ModeOccupation::parse("1,2,3,4", 10);
    const ModeOccupation d = ModeOccupation::parse("5,6,7,8", 10);
    CHECK(distance(c, d, Metric::L1) == 8.0);

    const ModeOccupation wrong = ModeOccupation::parse("1", 3);
    CHECK_THROWS_AS(distance(a, wrong, Metric::L1), DimensionError);
}

TEST_CASE("distance properties on random state triples") {
    Rng rng(20260810);
    const std::vector<ModeOccupation> states = enumerate_collision_free(3, 9);
    for (int trial = 0; trial < 500; ++trial) {
        const ModeOccupation &a = states[rng.uniform_index(states.size())];
        const ModeOccupation &b = states[rng.uniform_index(states.size())];
        const ModeOccupation &c = states[rng.uniform_index(states.size())];
        for (const Metric metric : {Metric::L1, Metric::L2}) {
            const double ab = distance(a, b, metric);
            const double bc = distance(b, c, metric);
            const double ac = distance(a, c, metric);
            CHECK(ac <= ab + bc + 1e-12);
            CHECK((ab == 0.0) == (a == b));
        }
        // L1 parity: even for equal-N collision-free pairs.
        const long l1 = static_cast<long>(distance(a, b, Metric::L1));
        CHECK(l1 % 2 == 0);
    }
}

TEST_CASE("textual forms round trip") {
    const ModeOccupation state = ModeOccupation::parse("6,7,8", 13);
    CHECK(state.to_string() == "6,7,8");
    CHECK(state.photon_count() == 3);
    CHECK(state.occupation(5) == 1);
    CHECK(ModeOccupation::parse(state.to_string(), 13) == state);

    // Collision states repeat the index.
    const ModeOccupation collision = ModeOccupation::parse("2,2,5", 6);
    CHECK(collision.photon_count() == 3);
    CHECK_FALSE(collision.collision_free());
    CHECK(collision.to_string() == "2,2,5");

    CHECK_THROWS_AS(ModeOccupation::parse("3,2", 4), IoError);
    CHECK_THROWS_AS(ModeOccupation::parse("0,2", 4), DimensionError);
    CHECK_THROWS_AS(ModeOccupation::parse("1,5", 4), DimensionError);
    CHECK_THROWS_AS(ModeOccupation::parse("", 4), IoError);
}

TEST_CASE("binomial saturates with an error instead of overflowing") {
    CHECK(binomial(70, 7) == 1'198'774'720ULL);
    CHECK_THROWS_AS(binomial(70, 35), CapacityError);
}
