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

#include <map>

#include "dhq/models.hpp"
#include "dhq/realms.hpp"
#include "oracle.hpp"

using namespace dhq;

namespace {

const HistoryGrid &box(ThreeBoxRealm r) {
    static std::map<ThreeBoxRealm, HistoryGrid> cache;
    auto it = cache.find(r);
    if (it == cache.end()) {
        it = cache.emplace(r, three_box(r).scenario.grid).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("coarse-graining sums class operators and branch vectors") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::random_decoherent_grid(rng);
        const auto p = oracle::random_partition(rng, g);
        const auto cg = coarse_grain(g, p);
        const auto ops = oracle::class_operators(g);
        const auto fine = decoherence_functional(g);
        CHECK(cg.report.decoherent);
        for (std::size_t c = 0; c < p.size(); ++c) {
            ComplexMatrix sum = ComplexMatrix::Zero(ops[0].rows(), ops[0].cols());
            double psum = 0.0;
            for (const auto &h : p.classes()[c]) {
                sum += ops[history_ordinal(g, h)];
                psum += fine.probabilities[history_ordinal(g, h)];
            }
            CHECK(max_abs(ComplexMatrix(cg.class_operators[c] - sum)) < 1e-10);
            CHECK(cg.report.probabilities[c] == doctest::Approx(psum).epsilon(1e-12).scale(1e-12));
        }
    }
}

TEST_CASE("join of the two past realms drops the empty product") {
    const auto j = refine_join(box(ThreeBoxRealm::past_A), box(ThreeBoxRealm::past_B));
    REQUIRE(j.grid.set_count() == 2);
    std::vector<std::string> names;
    for (const auto &p : j.grid.set(0).projectors()) {
        names.push_back(p.name());
    }
    CHECK(names == std::vector<std::string>{"A&notB", "notA&B", "notA&notB"});
    CHECK(j.grid.set(1).projectors()[0].name() == "Phi");
    CHECK(j.grid.history_count() == 6);
    CHECK_NOTHROW(j.onto_a.validate_for(j.grid));
    CHECK_NOTHROW(j.onto_b.validate_for(j.grid));
    CHECK(j.onto_a.labels() == std::vector<std::string>{"Phi,A", "notPhi,A", "Phi,notA",
                                                        "notPhi,notA"});
}

TEST_CASE("join requires commuting sets at shared times") {
    try {
        (void)refine_join(box(ThreeBoxRealm::past_A), box(ThreeBoxRealm::past_Psi));
        FAIL("expected NonCommutingSets");
    } catch (const NonCommutingSets &e) {
        CHECK(e.commutator_norm() > 0.1);
    }
    const auto other = two_slit(3, false);
    CHECK_THROWS_AS((void)refine_join(box(ThreeBoxRealm::past_A), other.scenario.grid),
                    DimensionMismatch);
}

TEST_CASE("compatibility verdicts") {
    const Realm a(box(ThreeBoxRealm::past_A));
    const Realm b(box(ThreeBoxRealm::past_B));
    const Realm psi(box(ThreeBoxRealm::past_Psi));
    const auto ab = check_compatibility(a, b);
    CHECK(ab.status == Compatibility::incompatible);
    REQUIRE(ab.joint_report);
    CHECK(ab.joint_report->max_offdiag_normalized == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(check_compatibility(b, a).status == Compatibility::incompatible);
    const auto apsi = check_compatibility(a, psi);
    CHECK(apsi.status == Compatibility::undetermined);
    CHECK(apsi.commutator_norm > 0.1);
    CHECK(check_compatibility(a, a).status == Compatibility::compatible);
    CHECK_THROWS_AS(Realm(box(ThreeBoxRealm::joint_AB)), NotDecoherent);
}

TEST_CASE("retrodiction in the past realms") {
    for (auto r : {ThreeBoxRealm::past_A, ThreeBoxRealm::past_B}) {
        const auto &g = box(r);
        const auto t = retrodict(g, resolve_alternative(g, "Phi@2"));
        REQUIRE(t.entries.size() == 2);
        CHECK(t.entries[0].probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(t.entries[1].probability) < 1e-12);
        CHECK(t.data_probability == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        CHECK(t.data_label == "Phi@2");
    }
    const auto &g = box(ThreeBoxRealm::past_A);
    CHECK_THROWS_AS((void)predict(g, resolve_alternative(g, "Phi@2")), ValidationError);
    CHECK_THROWS_AS((void)retrodict(g, resolve_alternative(g, "A@1")), ValidationError);
    CHECK_THROWS_AS((void)retrodict(box(ThreeBoxRealm::joint_AB),
                                    resolve_alternative(box(ThreeBoxRealm::joint_AB), "Phi")),
                    NotDecoherent);
}

TEST_CASE("prediction from data at the earliest time") {
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const Projector zero(p0, "0");
    ComplexVector plus = ComplexVector::Ones(2).normalized();
    const Projector pp(ComplexMatrix(plus * plus.adjoint()), "+");
    ComplexVector psi = ComplexVector::Zero(2);
    psi(0) = 1.0;
    const HistoryGrid g({AlternativeSet(1.0, {zero, complement(zero)}, "z"),
                         AlternativeSet(2.0, {pp, complement(pp)}, "x")},
                        Hamiltonian::zero(2), StateVector::normalized(psi));
    const auto t = predict(g, resolve_alternative(g, "0@1"));
    REQUIRE(t.entries.size() == 2);
    CHECK(t.entries[0].label == "+");
    CHECK(t.entries[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)predict(g, resolve_alternative(g, "not0@1")), ConditionOnNull);
}

TEST_CASE("conditional probability over history sets") {
    const auto &g = box(ThreeBoxRealm::past_A);
    const auto phi = histories_with(g, 1, 0);
    const auto a = histories_with(g, 0, 0);
    CHECK(conditional_probability(g, a, phi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conditional_probability(g, phi, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const std::vector<HistoryIndex> empty_branch{HistoryIndex{{1, 0}}};
    CHECK_THROWS_AS((void)conditional_probability(g, a, empty_branch), ConditionOnNull);
}
