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
 * Realms (decoherent sets of histories): coarse-graining, common
 * refinements, compatibility verdicts and conditional probabilities for
 * prediction and retrodiction.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dhq/decoherence.hpp"
#include "dhq/partition.hpp"

namespace dhq {

/// Conditioning on data whose probability is at or below this is an error.
inline constexpr double kProbabilityFloor = 1e-12;

/// Products P_a Q_b with max-norm below this are dropped from joins.
inline constexpr double kZeroProduct = 1e-12;

/// Class operators are materialized only up to this Hilbert space dimension.
inline constexpr std::size_t kDenseClassOperatorLimit = 512;

struct CoarseGraining {
    Partition partition;
    /// Summed class operators, one per class. Empty when the grid
    /// dimension exceeds kDenseClassOperatorLimit.
    std::vector<ComplexMatrix> class_operators;
    /// Report over the coarse branch vectors (sums of fine ones).
    DecoherenceReport report;
};

/// Throws InvalidPartition. If the fine set decoheres and the coarse report
/// breaks the Cauchy-Schwarz bound that decoherence implies, throws
/// std::logic_error (an engine bug, not an input error).
[[nodiscard]] CoarseGraining coarse_grain(const HistoryGrid &grid,
                                          const Partition &partition,
                                          const DecoherenceOptions &options = {});

/// Common fine-graining of two grids and the partitions that recover each
/// input from it.
struct RefinementJoin {
    HistoryGrid grid;
    Partition onto_a;
    Partition onto_b;
};

/// At shared times the joint set is {P_a Q_b} minus vanishing products; other
/// times keep their original set. Alternatives are named "A&B".
/// Throws DimensionMismatch (different H, |Psi> or dimension) or
/// NonCommutingSets.
[[nodiscard]] RefinementJoin refine_join(const HistoryGrid &a, const HistoryGrid &b);

/// A grid certified decoherent at construction.
class Realm {
  public:
    /// Throws NotDecoherent.
    explicit Realm(HistoryGrid grid, const DecoherenceOptions &options = {});

    [[nodiscard]] const HistoryGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] const DecoherenceReport &report() const noexcept {
        return report_;
    }
    [[nodiscard]] const DecoherenceOptions &options() const noexcept {
        return options_;
    }

  private:
    HistoryGrid grid_;
    DecoherenceReport report_;
    DecoherenceOptions options_;
};

enum class Compatibility { compatible, incompatible, undetermined };

[[nodiscard]] const char *to_string(Compatibility c) noexcept;

struct CompatibilityVerdict {
    Compatibility status = Compatibility::undetermined;
    /// compatible: the decoherent joint grid; incompatible: the joint grid
    /// that failed.
    std::optional<HistoryGrid> joint;
    std::optional<DecoherenceReport> joint_report;
    /// Largest commutator met at a shared time (only for undetermined).
    double commutator_norm = 0.0;
    std::string reason;
};

/// Decides via the canonical commuting join only: `incompatible` is
/// certified for that candidate, and non-commuting sets give
/// `undetermined`. Throws DimensionMismatch.
[[nodiscard]] CompatibilityVerdict check_compatibility(const Realm &a, const Realm &b);

/// p(target | given) = sum_{target & given} p / sum_{given} p over a
/// decoherent grid. Throws NotDecoherent or ConditionOnNull.
[[nodiscard]] double conditional_probability(const HistoryGrid &grid,
                                             const std::vector<HistoryIndex> &target,
                                             const std::vector<HistoryIndex> &given,
                                             const DecoherenceOptions &options = {});

struct ConditionalEntry {
    /// Alternatives of the non-data sets, in time order.
    std::vector<std::size_t> alts;
    std::string label;
    double probability = 0.0;
};

struct ConditionalTable {
    std::string data_label;
    double data_probability = 0.0;  ///< |P_d Psi|^2
    std::vector<ConditionalEntry> entries;
    double total = 0.0;
    DecoherenceReport report;
};

/// p(past | d) = |P_d(t0) C_past Psi|^2 / |P_d(t0) Psi|^2. The data set must
/// be the latest set of the grid; the whole grid must decohere.
/// Throws ValidationError (ordering), NotDecoherent, ConditionOnNull.
[[nodiscard]] ConditionalTable retrodict(const HistoryGrid &grid, AlternativeRef data,
                                         const DecoherenceOptions &options = {});

/// p(future | d) = |C_future P_d(t0) Psi|^2 / |P_d(t0) Psi|^2. The data set
/// must be the earliest set of the grid.
[[nodiscard]] ConditionalTable predict(const HistoryGrid &grid, AlternativeRef data,
                                       const DecoherenceOptions &options = {});

} // namespace dhq
