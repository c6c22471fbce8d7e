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
 * Decoherence functional D(a, b) = <Psi_a|Psi_b>, medium decoherence
 * verdicts, history probabilities and probability sum rules.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dhq/histories.hpp"
#include "dhq/partition.hpp"

namespace dhq {

inline constexpr double kDefaultTolDec = 1e-8;

/// Branches with D(a, a) below this never interfere; also the additive
/// floor in the normalized off-diagonal.
inline constexpr double kOffdiagFloor = 1e-14;

/// Reports keep the full Gram matrix up to this many histories.
inline constexpr std::size_t kGramStoreLimit = 4096;

struct DecoherenceOptions {
    double tol_dec = kDefaultTolDec;
    /// Worker threads for the Gram fill. Results are bit-identical for any
    /// value: every entry is one independent dot product.
    unsigned threads = 1;
};

struct DecoherenceReport {
    std::vector<std::string> labels;
    /// D(a, b); empty when there are more than kGramStoreLimit histories.
    ComplexMatrix gram;
    /// Diagonal of D, unclamped.
    std::vector<double> probabilities;
    /// Sum of every entry of D, which equals <Psi|Psi> = 1.
    double gram_total = 0.0;
    double max_offdiag_normalized = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
    bool decoherent = true;
    double tol_used = kDefaultTolDec;

    [[nodiscard]] std::size_t size() const noexcept {
        return probabilities.size();
    }
};

/// |D(a,b)| / (sqrt(D(a,a) D(b,b)) + floor), or 0 when either diagonal is
/// below the floor.
[[nodiscard]] double normalized_offdiag(Complex dab, double daa, double dbb);

[[nodiscard]] DecoherenceReport
decoherence_from_branches(std::span<const ComplexVector> branches,
                          std::vector<std::string> labels,
                          const DecoherenceOptions &options = {});

/// Full report over every history of the grid. Throws GridTooLarge.
[[nodiscard]] DecoherenceReport
decoherence_functional(const HistoryGrid &grid,
                       const DecoherenceOptions &options = {});

/// Probabilities were requested from a set that does not decohere. The
/// report shows where the interference is.
class NotDecoherent : public Error {
  public:
    explicit NotDecoherent(DecoherenceReport report);
    [[nodiscard]] const DecoherenceReport &report() const noexcept {
        return report_;
    }

  private:
    DecoherenceReport report_;
};

struct HistoryProbability {
    HistoryIndex history;
    std::string label;
    double probability = 0.0;  ///< clamped to [0, 1]
};

/// p(a) = |C_a Psi|^2 for a decoherent grid. Throws NotDecoherent.
[[nodiscard]] std::vector<HistoryProbability>
probabilities(const HistoryGrid &grid, const DecoherenceOptions &options = {});

/// max over classes of |p(class) - sum_{a in class} p(a)|, with p(class)
/// computed from the summed class operator. Throws InvalidPartition.
[[nodiscard]] double check_sum_rules(const HistoryGrid &grid,
                                     const Partition &partition);

} // namespace dhq
