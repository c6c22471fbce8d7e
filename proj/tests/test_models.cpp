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

#include <numbers>

#include "dhq/models.hpp"
#include "dhq/realms.hpp"
#include "oracle.hpp"

using namespace dhq;

namespace {

/// |a_u(b) + a_l(b)|^2 / 2 minus the incoherent sum, from the amplitude
/// formula written out independently.
double interference(std::size_t bins, std::size_t b) {
    const double m = static_cast<double>(bins);
    auto amp = [&](double c) {
        const double x = static_cast<double>(b) - c;
        return std::exp(Complex(0.0, std::numbers::pi * x * x / m)) / std::sqrt(m);
    };
    const Complex u = amp(m / 2.0 - 1.0);
    const Complex l = amp(m / 2.0);
    return 0.5 * std::norm(u + l) - 0.5 * (std::norm(u) + std::norm(l));
}

} // namespace

TEST_CASE("three-box probabilities") {
    const auto g = three_box(ThreeBoxRealm::past_A).scenario.grid;
    const auto ref = oracle::gram(g);
    // Order: (A,Phi), (A,notPhi), (notA,Phi), (notA,notPhi).
    CHECK(ref(0, 0).real() == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(ref(1, 1).real() == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(std::abs(ref(2, 2)) < 1e-15);
    CHECK(ref(3, 3).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    const auto ps = probabilities(g);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(ps[i].probability == doctest::Approx(ref(i, i).real()).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("past_A and past_B are related by swapping A and B") {
    const auto a = probabilities(three_box(ThreeBoxRealm::past_A).scenario.grid);
    const auto b = probabilities(three_box(ThreeBoxRealm::past_B).scenario.grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].probability == doctest::Approx(b[i].probability).epsilon(1e-12).scale(1e-12));
    }
    ComplexMatrix swap = ComplexMatrix::Zero(3, 3);
    swap(0, 1) = swap(1, 0) = swap(2, 2) = 1.0;
    const auto ga = three_box(ThreeBoxRealm::past_A).scenario.grid;
    const auto gb = three_box(ThreeBoxRealm::past_B).scenario.grid;
    CHECK(max_abs(ComplexMatrix(swap * ga.set(0)[0].matrix() * swap - gb.set(0)[0].matrix())) <
          1e-15);
    CHECK(max_abs(ComplexVector(swap * ga.initial_state().amplitudes() -
                                gb.initial_state().amplitudes())) < 1e-15);
}

TEST_CASE("joint three-box set does not decohere") {
    const auto g = three_box(ThreeBoxRealm::joint_AB).scenario.grid;
    CHECK(g.history_count() == 8);
    const auto rep = decoherence_functional(g);
    CHECK_FALSE(rep.decoherent);
    CHECK(rep.max_offdiag_normalized == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(oracle::max_normalized_offdiag(oracle::gram(g)) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-slit amplitude table and totals") {
    for (std::size_t bins = 2; bins <= 10; ++bins) {
        for (bool env : {false, true}) {
            const auto m = two_slit(bins, env);
            const auto &g = m.scenario.grid;
            const auto rep = decoherence_functional(g);
            CHECK(rep.gram_total == doctest::Approx(1.0).epsilon(1e-12));
            const auto screen = coarse_grain(g, *m.scenario.partition("screen"));
            double total = 0.0;
            for (double p : screen.report.probabilities) {
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            const auto slit = coarse_grain(g, *m.scenario.partition("slit"));
            CHECK(slit.report.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(slit.report.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(rep.decoherent == env);
            CHECK(screen.report.decoherent);
        }
        double amp_norm_u = 0.0;
        for (std::size_t b = 0; b < bins; ++b) {
            amp_norm_u += std::norm(two_slit_amplitude(bins, 0, b));
        }
        CHECK(amp_norm_u == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("two-slit sum rule violation equals the interference term") {
    for (std::size_t bins : {4u, 8u, 12u}) {
        const auto m = two_slit(bins, false);
        double worst = 0.0;
        for (std::size_t b = 0; b < bins; ++b) {
            worst = std::max(worst, std::abs(interference(bins, b)));
        }
        const double v = check_sum_rules(m.scenario.grid, *m.scenario.partition("screen"));
        CHECK(v == doctest::Approx(worst).epsilon(1e-10));
    }
    const auto env = two_slit(8, true);
    CHECK(check_sum_rules(env.scenario.grid, *env.scenario.partition("screen")) < 1e-12);
    CHECK_THROWS_AS((void)two_slit(1, false), ValidationError);
}

TEST_CASE("which-slit record makes bin probabilities additive") {
    const auto m = two_slit(8, true);
    const auto &g = m.scenario.grid;
    const auto fine = decoherence_functional(g);
    const auto screen = coarse_grain(g, *m.scenario.partition("screen"));
    for (std::size_t b = 0; b < 8; ++b) {
        double sum = 0.0;
        for (const auto &h : histories_with(g, 1, b)) {
            sum += fine.probabilities[history_ordinal(g, h)];
        }
        CHECK(std::abs(screen.report.probabilities[b] - sum) < 1e-12);
    }
}

TEST_CASE("spin environment matches the explicit state-vector oracle") {
    for (double theta : {std::numbers::pi / 6, std::numbers::pi / 2, 2.5}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            const auto m = spin_environment(n, theta);
            const auto rep = decoherence_functional(m.scenario.grid);
            const auto bs = oracle::spin_environment_branches(n, theta);
            oracle::Mat ref(4, 4);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    ref(i, j) = bs[static_cast<std::size_t>(i)].dot(bs[static_cast<std::size_t>(j)]);
                }
            }
            CHECK(max_abs(ComplexMatrix(rep.gram - ref)) < 1e-12);
            CHECK(rep.max_offdiag_normalized ==
                  doctest::Approx(m.record_overlap).epsilon(1e-10).scale(1e-10));
        }
    }
}

TEST_CASE("spin environment limits") {
    const auto perfect = spin_environment(1, std::numbers::pi);
    CHECK(decoherence_functional(perfect.scenario.grid).max_offdiag_normalized < 1e-15);
    const auto none = spin_environment(3, 0.0);
    CHECK(decoherence_functional(none.scenario.grid).max_offdiag_normalized ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)spin_environment(0, 1.0), EnvironmentTooLarge);
    CHECK_THROWS_AS((void)spin_environment(21, 1.0), EnvironmentTooLarge);
    CHECK_THROWS_AS((void)spin_environment(2, -0.1), ValidationError);
    CHECK_THROWS_AS((void)spin_environment(2, 4.0), ValidationError);
}
