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
 * Alternative sets at a sequence of times, the histories they generate,
 * class operators and branch state vectors.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhq/linalg.hpp"

namespace dhq {

/// Exhaustive set of exclusive alternatives {P_a} at one time. Projectors are
/// stored in the Schroedinger picture and evolved to `time()` on demand.
class AlternativeSet {
  public:
    /// Validates sum P_a = I and P_a P_b = delta_ab P_a at kTolAlg.
    AlternativeSet(double time, std::vector<Projector> projectors,
                   std::string label);

    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] const std::vector<Projector> &projectors() const noexcept {
        return projectors_;
    }
    [[nodiscard]] const Projector &operator[](std::size_t i) const {
        return projectors_.at(i);
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return projectors_.size();
    }
    [[nodiscard]] std::size_t dim() const noexcept {
        return projectors_.front().dim();
    }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;

    [[nodiscard]] AlternativeSet at_time(double time) const;

  private:
    double time_;
    std::vector<Projector> projectors_;
    std::string label_;
};

/// One alternative per set, in time order: (alpha_1, ..., alpha_n).
struct HistoryIndex {
    std::vector<std::size_t> alts;

    auto operator<=>(const HistoryIndex &) const = default;
    bool operator==(const HistoryIndex &) const = default;
};

struct GridOptions {
    /// Enumeration fails with GridTooLarge above this many histories.
    std::size_t max_histories = 1'000'000;
};

/// Sets of alternatives at strictly increasing times, with the Hamiltonian
/// and the initial state |Psi>. Immutable; copies share the evolution cache.
class HistoryGrid {
  public:
    HistoryGrid(std::vector<AlternativeSet> sets, Hamiltonian hamiltonian,
                StateVector initial_state, GridOptions options = {});

    [[nodiscard]] const std::vector<AlternativeSet> &sets() const noexcept {
        return sets_;
    }
    [[nodiscard]] const AlternativeSet &set(std::size_t k) const {
        return sets_.at(k);
    }
    [[nodiscard]] std::size_t set_count() const noexcept {
        return sets_.size();
    }
    [[nodiscard]] const Hamiltonian &hamiltonian() const noexcept {
        return hamiltonian_;
    }
    [[nodiscard]] const StateVector &initial_state() const noexcept {
        return psi_;
    }
    [[nodiscard]] std::size_t dim() const noexcept { return psi_.dim(); }
    [[nodiscard]] const GridOptions &options() const noexcept {
        return options_;
    }
    [[nodiscard]] std::vector<double> times() const;

    /// Product of the set sizes, saturating at SIZE_MAX.
    [[nodiscard]] std::size_t history_count() const noexcept;

    [[nodiscard]] bool contains(const HistoryIndex &h) const noexcept;

    /// Comma-joined alternative names, latest time first ("Phi,A").
    [[nodiscard]] std::string label(const HistoryIndex &h) const;

    /// Heisenberg-picture projector P^k_a(t_k) as a dense matrix, computed
    /// once per set and shared by all copies of the grid.
    [[nodiscard]] const ComplexMatrix &heisenberg(std::size_t set,
                                                  std::size_t alt) const;

    [[nodiscard]] HistoryGrid with_options(GridOptions options) const;

  private:
    struct Cache;

    std::vector<AlternativeSet> sets_;
    Hamiltonian hamiltonian_;
    StateVector psi_;
    GridOptions options_;
    std::shared_ptr<Cache> cache_;
};

/// All histories in lexicographic order, first time slowest-varying.
/// Throws GridTooLarge past options().max_histories.
[[nodiscard]] std::vector<HistoryIndex> enumerate_histories(const HistoryGrid &grid);

/// C_alpha = P^n(t_n) ... P^1(t_1), latest time leftmost.
[[nodiscard]] ComplexMatrix class_operator(const HistoryGrid &grid,
                                           const HistoryIndex &h);

/// |Psi_alpha> = C_alpha |Psi> (unnormalized).
[[nodiscard]] StateVector branch_vector(const HistoryGrid &grid,
                                        const HistoryIndex &h);

/// Branch vectors of every history in enumeration order. Computed by
/// propagating |Psi> through the chain with shared prefixes, so no class
/// operator is ever formed.
[[nodiscard]] std::vector<ComplexVector> branch_vectors(const HistoryGrid &grid);

/// Position of `h` in enumerate_histories order.
[[nodiscard]] std::size_t history_ordinal(const HistoryGrid &grid,
                                          const HistoryIndex &h);

/// Histories whose alternative in `set` is `alt`.
[[nodiscard]] std::vector<HistoryIndex>
histories_with(const HistoryGrid &grid, std::size_t set, std::size_t alt);

/// Resolves "NAME@TIME" to (set, alternative). Throws ValidationError.
struct AlternativeRef {
    std::size_t set = 0;
    std::size_t alt = 0;
};
[[nodiscard]] AlternativeRef resolve_alternative(const HistoryGrid &grid,
                                                 std::string_view ref);

} // namespace dhq
