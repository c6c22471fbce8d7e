// Copyright 2026 The dhq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include "dhq/errors.hpp"
#include "dhq/spacetime.hpp"
#include "oracle.hpp"

using namespace dhq;

TEST_CASE("interval classification") {
    const Event o{};
    CHECK(classify(o, {0, 1, 0, 0}) == Separation::spacelike);
    CHECK(classify(o, {2, 1, 0, 0}) == Separation::timelike_future);
    CHECK(classify(o, {-2, 0, 1, 0}) == Separation::timelike_past);
    CHECK(classify(o, {1, 1, 0, 0}) == Separation::null_future);
    CHECK(classify(o, {-1, 0, 0, 1}) == Separation::null_past);
    CHECK(classify(o, o) == Separation::null_future);
}

TEST_CASE("boosts match the Lorentz matrix") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> c(-5, 5);
    std::uniform_real_distribution<double> v(-0.55, 0.55);
    for (int i = 0; i < 200; ++i) {
        const Event e{c(rng), c(rng), c(rng), c(rng)};
        const std::array<double, 3> vel{v(rng), v(rng), v(rng)};
        const Event out = boost_event(e, Boost(vel));
        const Eigen::Vector4d ref = oracle::lorentz(vel) * Eigen::Vector4d(e.t, e.x, e.y, e.z);
        CHECK(std::abs(out.t - ref(0)) < 1e-12);
        CHECK(std::abs(out.x - ref(1)) < 1e-12);
        CHECK(std::abs(out.y - ref(2)) < 1e-12);
        CHECK(std::abs(out.z - ref(3)) < 1e-12);
    }
    const Event e{1, 2, 3, 4};
    const Event same = boost_event(e, Boost({0, 0, 0}));
    CHECK(same.t == e.t);
    CHECK(same.x == e.x);
    CHECK_THROWS_AS(Boost({0.8, 0.6, 0.0}), SuperluminalBoost);
}

TEST_CASE("temporal order of a spacelike pair depends on the frame") {
    const Event a{};
    const Event b{0, 1, 0, 0};
    const double g = 1.0 / std::sqrt(1.0 - 0.25);
    const double plus = boost_event(b, Boost({0.5, 0, 0})).t;
    CHECK(plus == doctest::Approx(-g / 2));
    CHECK(boost_event(b, Boost({-0.5, 0, 0})).t > 0.0);
    CHECK(happened_relative_to_surface(a, b, Boost({0, 0, 0})) == SurfaceSide::on_S);
    CHECK(happened_relative_to_surface(a, b, Boost({0.5, 0, 0})) == SurfaceSide::past_of_S);
    CHECK(happened_relative_to_surface(a, a, Boost({0.3, 0.1, 0})) == SurfaceSide::on_S);

    const Event c{0.4, 0.3, -1.0, 0.5};
    const auto sim = simultaneity_boost(a, c);
    REQUIRE(sim);
    CHECK(std::abs(boost_event(c, *sim).t - boost_event(a, *sim).t) < 1e-12);
    const auto ob = ordering_boosts(a, c);
    REQUIRE(ob);
    CHECK(boost_event(c, ob->b_first).t < boost_event(a, ob->b_first).t);
    CHECK(boost_event(c, ob->a_first).t > boost_event(a, ob->a_first).t);
    CHECK_FALSE(ordering_boosts(a, {2, 1, 0, 0}));
}

TEST_CASE("causal order of timelike pairs is frame independent") {
    const Event a{};
    const Event b{2, 1, 0.5, 0};
    for (double vx = -0.95; vx < 0.96; vx += 0.05) {
        for (double vy = -0.25; vy < 0.26; vy += 0.25) {
            const Boost s({vx, vy, 0});
            CHECK(happened_relative_to_surface(a, b, s) == SurfaceSide::future_of_S);
            CHECK(classify(boost_event(a, s), boost_event(b, s)) == Separation::timelike_future);
        }
    }
}

TEST_CASE("common present contingencies") {
    IgusGroup earth;
    earth.igus = {Igus{{0, 0, 0}, {0, 0, 0}}, Igus{{0.004, 0, 0}, {0, 0, 0}}};
    earth.tau_star = 0.1;
    earth.env_timescale = 10.0;
    const auto r = common_present_check(earth);
    CHECK(r.slow_relative_motion);
    CHECK(r.short_light_time);
    CHECK(r.fast_perception);
    CHECK(r.common_present);
    CHECK(r.thresholds.v_max == 0.01);
    CHECK(r.thresholds.ratio == 0.1);

    IgusGroup titan = earth;
    titan.igus[1].position = {4.2e3, 0, 0};
    const auto t = common_present_check(titan);
    CHECK_FALSE(t.short_light_time);
    CHECK_FALSE(t.common_present);
    CHECK(t.max_light_time >= 3600.0);

    IgusGroup one = earth;
    one.igus.resize(1);
    CHECK(common_present_check(one).common_present);

    IgusGroup fast = earth;
    fast.igus[1].velocity = {0.05, 0, 0};
    CHECK_FALSE(common_present_check(fast).slow_relative_motion);
    CHECK_THROWS_AS((void)common_present_check(IgusGroup{}), ValidationError);
}

TEST_CASE("relativistic relative speed") {
    CHECK(relative_speed({0.5, 0, 0}, {-0.5, 0, 0}) == doctest::Approx(0.8));
    CHECK(relative_speed({0.3, 0.2, 0}, {0.3, 0.2, 0}) == doctest::Approx(0.0));
}

TEST_CASE("event parsing") {
    const auto e = parse_event("1,2.5,-3");
    CHECK(e.t == 1.0);
    CHECK(e.y == -3.0);
    CHECK(e.z == 0.0);
    CHECK_THROWS_AS((void)parse_event("1,x"), ParseError);
    CHECK_THROWS_AS((void)parse_event("1,2,3,4,5"), ParseError);
}
