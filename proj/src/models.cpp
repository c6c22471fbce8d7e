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
#include "dhq/models.hpp"

#include <cmath>
#include <numbers>

namespace dhq {

namespace {

ComplexVector real_vector(std::initializer_list<double> xs) {
    ComplexVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) {
        v(i++) = Complex(x, 0.0);
    }
    return v;
}

Projector ray(const ComplexVector &v, std::string name, std::size_t trailing = 1) {
    const ComplexVector u = v.normalized();
    return Projector(u * u.adjoint(), std::move(name), trailing);
}

AlternativeSet binary_set(double time, const Projector &p, std::string label) {
    return AlternativeSet(time, {p, complement(p)}, std::move(label));
}

} // namespace

// ---------------------------------------------------------------------------
// Three-box model

const char *to_string(ThreeBoxRealm r) noexcept {
    switch (r) {
    case ThreeBoxRealm::past_A:
        return "past_A";
    case ThreeBoxRealm::past_B:
        return "past_B";
    case ThreeBoxRealm::past_Psi:
        return "past_Psi";
    case ThreeBoxRealm::joint_AB:
        return "joint_AB";
    }
    return "past_A";
}

ThreeBoxRealm parse_three_box_realm(std::string_view name) {
    for (auto r : {ThreeBoxRealm::past_A, ThreeBoxRealm::past_B, ThreeBoxRealm::past_Psi,
                   ThreeBoxRealm::joint_AB}) {
        if (name == to_string(r)) {
            return r;
        }
    }
    throw ValidationError("model.realm", "unknown three-box realm '" + std::string(name) +
                                             "' (past_A, past_B, past_Psi, joint_AB)");
}

ThreeBoxScenario three_box(ThreeBoxRealm realm) {
    const auto psi = real_vector({1.0, 1.0, 1.0}).normalized();
    const auto phi = real_vector({1.0, 1.0, -1.0});
    const auto box_a = ray(real_vector({1.0, 0.0, 0.0}), "A");
    const auto box_b = ray(real_vector({0.0, 1.0, 0.0}), "B");
    const auto data = binary_set(0.0, ray(phi, "Phi"), "Phi");

    std::vector<AlternativeSet> sets;
    switch (realm) {
    case ThreeBoxRealm::past_A:
        sets.push_back(binary_set(1.0, box_a, "A"));
        sets.push_back(data.at_time(2.0));
        break;
    case ThreeBoxRealm::past_B:
        sets.push_back(binary_set(1.0, box_b, "B"));
        sets.push_back(data.at_time(2.0));
        break;
    case ThreeBoxRealm::past_Psi:
        sets.push_back(binary_set(1.0, ray(psi, "Psi"), "Psi"));
        sets.push_back(data.at_time(2.0));
        break;
    case ThreeBoxRealm::joint_AB:
        sets.push_back(binary_set(1.0, box_a, "A"));
        sets.push_back(binary_set(2.0, box_b, "B"));
        sets.push_back(data.at_time(3.0));
        break;
    }
    const double data_time = sets.back().time();
    HistoryGrid grid(std::move(sets), Hamiltonian::zero(3), StateVector::normalized(psi));
    std::vector<std::pair<std::string, Partition>> partitions;
    partitions.emplace_back("data", Partition::by_sets(grid, {grid.set_count() - 1}));
    Scenario sc{std::move(grid), std::move(partitions),
                "Phi@" + std::to_string(static_cast<int>(data_time))};
    return ThreeBoxScenario{realm, std::move(sc)};
}

// ---------------------------------------------------------------------------
// Two-slit experiment

Complex two_slit_amplitude(std::size_t bins, std::size_t slit, std::size_t bin) {
    const double m = static_cast<double>(bins);
    const double center = slit == 0 ? (m - 2.0) / 2.0 : m / 2.0;
    const double x = static_cast<double>(bin) - center;
    return std::polar(1.0 / std::sqrt(m), std::numbers::pi * x * x / m);
}

TwoSlitScenario two_slit(std::size_t bins, bool with_environment) {
    if (bins < 2) {
        throw ValidationError("model.bins", "two-slit model needs at least 2 screen bins");
    }
    const auto m = static_cast<Eigen::Index>(bins);

    // W: first two columns are the slit amplitudes, the rest completes an
    // orthonormal basis by Gram-Schmidt over the standard basis.
    ComplexMatrix w = ComplexMatrix::Zero(m, m);
    for (Eigen::Index b = 0; b < m; ++b) {
        w(b, 0) = two_slit_amplitude(bins, 0, static_cast<std::size_t>(b));
        w(b, 1) = two_slit_amplitude(bins, 1, static_cast<std::size_t>(b));
    }
    Eigen::Index filled = 2;
    for (Eigen::Index k = 0; k < m && filled < m; ++k) {
        ComplexVector v = ComplexVector::Unit(m, k);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < filled; ++j) {
                v -= w.col(j) * w.col(j).dot(v);
            }
        }
        if (v.norm() > 0.5 / std::sqrt(static_cast<double>(m))) {
            w.col(filled++) = v.normalized();
        }
    }

    const std::size_t trailing = with_environment ? 2 : 1;
    std::vector<Projector> slits;
    ComplexMatrix pu = ComplexMatrix::Zero(m, m);
    pu(0, 0) = 1.0;
    ComplexMatrix pl = ComplexMatrix::Zero(m, m);
    pl(1, 1) = 1.0;
    slits.emplace_back(pu, "upper", trailing);
    slits.emplace_back(pl, "lower", trailing);
    if (bins > 2) {
        slits.emplace_back(ComplexMatrix(ComplexMatrix::Identity(m, m) - pu - pl), "none",
                           trailing);
    }
    std::vector<Projector> screen;
    for (Eigen::Index b = 0; b < m; ++b) {
        const ComplexVector row = w.row(b).adjoint();
        screen.emplace_back(ComplexMatrix(row * row.adjoint()), "bin" + std::to_string(b),
                            trailing);
    }

    const auto dim = m * static_cast<Eigen::Index>(trailing);
    ComplexVector psi = ComplexVector::Zero(dim);
    const double r = 1.0 / std::sqrt(2.0);
    if (with_environment) {
        psi(0) = r;  // |upper>|0>
        psi(3) = r;  // |lower>|1>
    } else {
        psi(0) = r;
        psi(1) = r;
    }
    std::vector<AlternativeSet> sets;
    sets.emplace_back(1.0, std::move(slits), "slit");
    sets.emplace_back(2.0, std::move(screen), "screen");
    HistoryGrid grid(std::move(sets), Hamiltonian::zero(static_cast<std::size_t>(dim)),
                     StateVector::normalized(std::move(psi)));
    std::vector<std::pair<std::string, Partition>> partitions;
    partitions.emplace_back("screen", Partition::by_sets(grid, {1}));
    partitions.emplace_back("slit", Partition::by_sets(grid, {0}));
    return TwoSlitScenario{bins, with_environment,
                           Scenario{std::move(grid), std::move(partitions), std::nullopt}};
}

// ---------------------------------------------------------------------------
// Spin environment

SpinEnvironmentScenario spin_environment(std::size_t n_env, double theta) {
    if (n_env < 1 || n_env > kMaxEnvironmentQubits) {
        throw EnvironmentTooLarge("spin environment needs 1.." +
                                  std::to_string(kMaxEnvironmentQubits) +
                                  " qubits, got " + std::to_string(n_env));
    }
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw ValidationError("model.theta", "theta must lie in [0, pi]");
    }
    ConditionalQubitTerms terms;
    terms.control_dim = 2;
    terms.env_qubits = n_env;
    Eigen::Matrix2cd sigma_y;
    sigma_y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    terms.generators.assign(2, std::vector<Eigen::Matrix2cd>(n_env, Eigen::Matrix2cd::Zero()));
    for (auto &g : terms.generators[1]) {
        g = 0.5 * theta * sigma_y;
    }

    const std::size_t env_dim = std::size_t{1} << n_env;
    const auto dim = static_cast<Eigen::Index>(2 * env_dim);
    ComplexVector psi = ComplexVector::Zero(dim);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(static_cast<Eigen::Index>(env_dim)) = 1.0 / std::sqrt(2.0);

    const auto zero = ray(real_vector({1.0, 0.0}), "0", env_dim);
    const auto one = ray(real_vector({0.0, 1.0}), "1", env_dim);
    const auto plus = ray(real_vector({1.0, 1.0}), "+", env_dim);
    const auto minus = ray(real_vector({1.0, -1.0}), "-", env_dim);
    std::vector<AlternativeSet> sets;
    sets.emplace_back(0.0, std::vector<Projector>{zero, one}, "system");
    sets.emplace_back(1.0, std::vector<Projector>{plus, minus}, "phase");
    HistoryGrid grid(std::move(sets), Hamiltonian::conditional_qubits(std::move(terms)),
                     StateVector::normalized(std::move(psi)));
    std::vector<std::pair<std::string, Partition>> partitions;
    partitions.emplace_back("system", Partition::by_sets(grid, {0}));

    const double overlap = std::pow(std::abs(std::cos(theta / 2.0)), static_cast<double>(n_env));
    return SpinEnvironmentScenario{
        n_env, theta, overlap, Scenario{std::move(grid), std::move(partitions), std::nullopt}};
}

} // namespace dhq
