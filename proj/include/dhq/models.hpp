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
/**
 * @file
 * Built-in scenarios: the three-box model, a two-slit experiment with an
 * optional which-slit record, and a system qubit dephased by a bath of
 * environment qubits.
 */
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "dhq/scenario.hpp"

namespace dhq {

// ---------------------------------------------------------------------------
// Three-box model

/// Basis |A>, |B>, |C>; H = 0; |Psi> = (1, 1, 1)/sqrt3, |Phi> = (1, 1, -1)/sqrt3.
enum class ThreeBoxRealm { past_A, past_B, past_Psi, joint_AB };

[[nodiscard]] const char *to_string(ThreeBoxRealm r) noexcept;

/// Throws ValidationError for an unknown name.
[[nodiscard]] ThreeBoxRealm parse_three_box_realm(std::string_view name);

struct ThreeBoxScenario {
    ThreeBoxRealm realm;
    /// past_*: {X, notX} at t=1 and {Phi, notPhi} at t=2.
    /// joint_AB: {A, notA} at 1, {B, notB} at 2, {Phi, notPhi} at 3.
    Scenario scenario;
};

[[nodiscard]] ThreeBoxScenario three_box(ThreeBoxRealm realm);

// ---------------------------------------------------------------------------
// Two-slit experiment

/// The particle lives in C^bins. Slit states are |0> (upper) and |1>
/// (lower); the remaining bins-2 states form the "none" alternative.
/// Passage to the screen is the unitary W with
///
///   W|s> = a_s,   a_s(b) = exp(i pi (b - c_s)^2 / bins) / sqrt(bins),
///
/// c_upper = (bins - 2)/2, c_lower = bins/2. The two columns are exactly
/// orthonormal because c_lower - c_upper = 1. H = 0; the screen projectors
/// at t=2 are W^dag |b><b| W.
struct TwoSlitScenario {
    std::size_t bins = 0;
    bool with_environment = false;
    /// Slits at t=1, screen bins at t=2. With the environment an ancilla
    /// qubit records the slit: |Psi> = (|upper,0> + |lower,1>)/sqrt2.
    Scenario scenario;
};

/// Screen amplitude a_s(b) for slit s in {0, 1}.
[[nodiscard]] Complex two_slit_amplitude(std::size_t bins, std::size_t slit,
                                         std::size_t bin);

/// Throws ValidationError when bins < 2.
[[nodiscard]] TwoSlitScenario two_slit(std::size_t bins, bool with_environment);

// ---------------------------------------------------------------------------
// Spin environment

inline constexpr std::size_t kMaxEnvironmentQubits = 20;

/// A system qubit and n environment qubits, all starting in |0>, with
///
///   H = |1><1| (x) sum_k (theta/2) sigma_y^(k),
///
/// so between t=0 and t=1 every environment qubit is rotated by theta iff
/// the system is |1>. The grid follows only the system: {0, 1} at t=0 and
/// {+, -} at t=1.
struct SpinEnvironmentScenario {
    std::size_t n_env = 0;
    double theta = 0.0;
    /// Overlap of the two environment records, |cos(theta/2)|^n. This is
    /// what the normalized off-diagonal of the grid must equal.
    double record_overlap = 0.0;
    Scenario scenario;
};

/// Throws EnvironmentTooLarge unless 1 <= n_env <= kMaxEnvironmentQubits,
/// ValidationError unless 0 <= theta <= pi.
[[nodiscard]] SpinEnvironmentScenario spin_environment(std::size_t n_env,
                                                       double theta);

} // namespace dhq
