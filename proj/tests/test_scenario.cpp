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

#include "dhq/models.hpp"
#include "dhq/scenario.hpp"

using namespace dhq;

namespace {

void check_same_grid(const HistoryGrid &a, const HistoryGrid &b) {
    REQUIRE(a.set_count() == b.set_count());
    CHECK(a.dim() == b.dim());
    CHECK(a.hamiltonian().same_as(b.hamiltonian(), 0.0));
    CHECK(a.initial_state().amplitudes() == b.initial_state().amplitudes());
    for (std::size_t k = 0; k < a.set_count(); ++k) {
        CHECK(a.set(k).time() == b.set(k).time());
        CHECK(a.set(k).label() == b.set(k).label());
        REQUIRE(a.set(k).size() == b.set(k).size());
        for (std::size_t i = 0; i < a.set(k).size(); ++i) {
            CHECK(a.set(k)[i].name() == b.set(k)[i].name());
            CHECK(a.set(k)[i].trailing_dim() == b.set(k)[i].trailing_dim());
            CHECK(a.set(k)[i].local() == b.set(k)[i].local());
        }
    }
}

const char *kMinimal = R"({
  "schema": "dhq-scenario/1",
  "dimension": 2,
  "hamiltonian": "zero",
  "initial_state": [[1, 0], [0, 0]],
  "alternative_sets": [
    {"label": "z", "time": 1, "alternatives": [
      {"name": "up", "span": [[[1, 0], [0, 0]]]},
      {"name": "down", "matrix": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]}]}
  ],
  "partitions": {"all": {"classes": [{"label": "everything", "histories": [["up"], ["down"]]}]}},
  "data_projector": "up@1"
})";

std::string replace(std::string s, const std::string &from, const std::string &to) {
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

} // namespace

TEST_CASE("built-in models survive a dump and reparse") {
    std::vector<Scenario> models{three_box(ThreeBoxRealm::past_A).scenario,
                                 three_box(ThreeBoxRealm::joint_AB).scenario,
                                 two_slit(5, false).scenario, two_slit(4, true).scenario,
                                 spin_environment(3, 0.7).scenario};
    for (const auto &m : models) {
        const auto text = dump_scenario(m);
        const auto back = parse_scenario(text);
        check_same_grid(m.grid, back.grid);
        CHECK(back.partitions.size() == m.partitions.size());
        CHECK(back.data_projector == m.data_projector);
        CHECK(dump_scenario(back) == text);
    }
}

TEST_CASE("minimal scenario parses") {
    const auto sc = parse_scenario(kMinimal);
    CHECK(sc.grid.dim() == 2);
    CHECK(sc.grid.set(0)[0].name() == "up");
    REQUIRE(sc.partition("all") != nullptr);
    CHECK(sc.partition("all")->labels()[0] == "everything");
    CHECK(sc.data_projector == "up@1");
}

TEST_CASE("scenario errors carry locations") {
    try {
        (void)parse_scenario(replace(kMinimal, "[[0, 0], [1, 0]]]}", "[[0, 0], [0, 0]]]}"));
        FAIL("expected ValidationError");
    } catch (const ValidationError &e) {
        CHECK(e.invariant() == "alternative_set.completeness");
        CHECK(e.location() == "/alternative_sets/0");
        CHECK(std::string(e.what()).find("'z'") != std::string::npos);
    }
    try {
        (void)parse_scenario(replace(kMinimal, "\"dimension\": 2", "\"dimension\": \"two\""));
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.location() == "/dimension");
    }
    try {
        (void)parse_scenario(replace(kMinimal, "[[1, 0], [0, 0]]]}", "[[1, 0], [0]]]}"));
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.location() == "/alternative_sets/0/alternatives/0/span/0/1");
    }
    try {
        (void)parse_scenario(replace(kMinimal, "[\"down\"]", "[\"sideways\"]"));
        FAIL("expected ValidationError");
    } catch (const ValidationError &e) {
        CHECK(e.invariant() == "reference.unknown");
        CHECK(e.location() == "/partitions/all/classes/0/histories/1/0");
    }
    CHECK_THROWS_AS((void)parse_scenario("{"), ParseError);
    CHECK_THROWS_AS((void)parse_scenario(replace(kMinimal, "dhq-scenario/1", "other/2")),
                    ParseError);
    CHECK_THROWS_AS((void)load_scenario("/nonexistent/file.json"), ParseError);
}

TEST_CASE("non-increasing times are rejected at load") {
    const char *text = R"({
  "dimension": 2,
  "hamiltonian": "zero",
  "initial_state": [1, 0],
  "alternative_sets": [
    {"label": "a", "time": 2, "alternatives": [
      {"name": "u", "span": [[1, 0]]}, {"name": "d", "span": [[0, 1]]}]},
    {"label": "b", "time": 1, "alternatives": [
      {"name": "u", "span": [[1, 0]]}, {"name": "d", "span": [[0, 1]]}]}
  ]
})";
    try {
        (void)parse_scenario(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError &e) {
        CHECK(e.invariant() == "grid.times_increasing");
        CHECK(e.location() == "/alternative_sets");
    }
}
