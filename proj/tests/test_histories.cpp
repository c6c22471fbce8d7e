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

#include "oracle.hpp"

using namespace dhq;

namespace {

Projector diag(std::initializer_list<int> ones, std::size_t d, std::string name) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                          static_cast<Eigen::Index>(d));
    for (int i : ones) {
        m(i, i) = 1.0;
    }
    return Projector(m, std::move(name));
}

std::string invariant_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const ValidationError &e) {
        return e.invariant();
    }
    return "";
}

StateVector uniform(std::size_t d) {
    return StateVector::normalized(ComplexVector::Ones(static_cast<Eigen::Index>(d)).normalized());
}

} // namespace

TEST_CASE("alternative sets must be exhaustive, exclusive and uniquely named") {
    CHECK(invariant_of([] {
              AlternativeSet s(0.0, {diag({0}, 3, "a"), diag({1}, 3, "b")}, "s");
          }) == "alternative_set.completeness");
    CHECK(invariant_of([] {
              AlternativeSet s(0.0, {diag({0, 1}, 3, "a"), diag({1, 2}, 3, "b")}, "s");
          }) != "");
    CHECK(invariant_of([] {
              AlternativeSet s(0.0, {diag({0}, 2, "a"), diag({1}, 2, "a")}, "s");
          }) == "alternative_set.unique_names");
    try {
        AlternativeSet s(0.0, {diag({0}, 3, "a"), diag({1}, 3, "b")}, "myset");
    } catch (const ValidationError &e) {
        CHECK(std::string(e.what()).find("myset") != std::string::npos);
    }
}

TEST_CASE("grids need increasing times, matching dimensions and a unit state") {
    const AlternativeSet s1(1.0, {diag({0}, 2, "a"), diag({1}, 2, "b")}, "s");
    CHECK(invariant_of([&] {
              HistoryGrid g({s1, s1.at_time(1.0)}, Hamiltonian::zero(2), uniform(2));
          }) == "grid.times_increasing");
    CHECK(invariant_of([&] {
              HistoryGrid g({s1.at_time(2.0), s1}, Hamiltonian::zero(2), uniform(2));
          }) == "grid.times_increasing");
    CHECK_THROWS_AS(HistoryGrid({s1}, Hamiltonian::zero(3), uniform(3)), DimensionMismatch);
    CHECK(invariant_of([&] {
              HistoryGrid g({s1}, Hamiltonian::zero(2),
                            StateVector(ComplexVector::Ones(2)));
          }) == "state.normalized");
}

TEST_CASE("histories enumerate with the last set fastest and label latest first") {
    const AlternativeSet s1(1.0, {diag({0}, 2, "A"), diag({1}, 2, "notA")}, "first");
    const AlternativeSet s2(2.0, {diag({0}, 2, "Phi"), diag({1}, 2, "notPhi")}, "second");
    const HistoryGrid g({s1, s2}, Hamiltonian::zero(2), uniform(2));
    const auto hs = enumerate_histories(g);
    REQUIRE(hs.size() == 4);
    CHECK(hs[1].alts == std::vector<std::size_t>{0, 1});
    CHECK(g.label(hs[0]) == "Phi,A");
    CHECK(g.label(hs[3]) == "notPhi,notA");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CHECK(history_ordinal(g, hs[i]) == i);
    }
    CHECK(histories_with(g, 1, 0).size() == 2);
    CHECK_THROWS_AS((void)enumerate_histories(g.with_options({3})), GridTooLarge);
}

TEST_CASE("class operators and branch vectors match the dense oracle") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        // General (non-decoherent) sets: independent random bases per time.
        const Eigen::Index d = 2 + trial % 4;
        const auto h = oracle::random_hermitian(rng, d);
        std::vector<AlternativeSet> sets;
        for (int k = 0; k < 3; ++k) {
            const auto u = oracle::random_unitary(rng, d);
            const auto groups = oracle::random_groups(rng, d, 2);
            std::vector<Projector> ps;
            for (std::size_t gi = 0; gi < 2; ++gi) {
                ComplexMatrix p = oracle::group_projector(u, groups[gi]);
                ps.emplace_back(ComplexMatrix(0.5 * (p + p.adjoint())), "g" + std::to_string(gi));
            }
            sets.emplace_back(0.7 * (k + 1), std::move(ps), "s" + std::to_string(k));
        }
        const HistoryGrid g(sets, Hamiltonian(h),
                            StateVector::normalized(oracle::random_state(rng, d)));
        const auto ops = oracle::class_operators(g);
        const auto hs = enumerate_histories(g);
        const auto bs = branch_vectors(g);
        REQUIRE(ops.size() == hs.size());
        for (std::size_t i = 0; i < hs.size(); ++i) {
            CHECK(max_abs(ComplexMatrix(class_operator(g, hs[i]) - ops[i])) < 1e-10);
            const ComplexVector expect = ops[i] * g.initial_state().amplitudes();
            CHECK(max_abs(ComplexVector(bs[i] - expect)) < 1e-10);
            CHECK(max_abs(ComplexVector(branch_vector(g, hs[i]).amplitudes() - expect)) < 1e-10);
        }
    }
}

TEST_CASE("alternative references resolve by name and time") {
    const AlternativeSet s1(1.0, {diag({0}, 2, "A"), diag({1}, 2, "B")}, "first");
    const AlternativeSet s2(2.5, {diag({0}, 2, "A"), diag({1}, 2, "C")}, "second");
    const HistoryGrid g({s1, s2}, Hamiltonian::zero(2), uniform(2));
    CHECK(resolve_alternative(g, "A@2.5").set == 1);
    CHECK(resolve_alternative(g, "C").alt == 1);
    CHECK(invariant_of([&] { (void)resolve_alternative(g, "A"); }) == "reference.ambiguous");
    CHECK(invariant_of([&] { (void)resolve_alternative(g, "Z@1"); }) == "reference.unknown");
    CHECK(invariant_of([&] { (void)resolve_alternative(g, "A@x"); }) == "reference.time");
}

TEST_CASE("partitions must cover every history exactly once") {
    const AlternativeSet s1(1.0, {diag({0}, 2, "A"), diag({1}, 2, "B")}, "first");
    const HistoryGrid g({s1}, Hamiltonian::zero(2), uniform(2));
    CHECK_NOTHROW(Partition::singletons(g).validate_for(g));
    CHECK_NOTHROW(Partition::whole(g).validate_for(g));
    const Partition missing({{HistoryIndex{{0}}}}, {"x"});
    CHECK_THROWS_AS(missing.validate_for(g), InvalidPartition);
    const Partition twice({{HistoryIndex{{0}}, HistoryIndex{{1}}}, {HistoryIndex{{1}}}}, {});
    CHECK_THROWS_AS(twice.validate_for(g), InvalidPartition);
    CHECK_THROWS_AS(Partition({{HistoryIndex{{0}}}}, {"a", "b"}), InvalidPartition);
}
