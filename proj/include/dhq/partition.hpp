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
#pragma once

#include <string>
#include <vector>

#include "dhq/histories.hpp"

namespace dhq {

/// Exhaustive, exclusive classes of a grid's histories (a coarse-graining).
class Partition {
  public:
    Partition(std::vector<std::vector<HistoryIndex>> classes,
              std::vector<std::string> labels);

    /// Every history in its own class, labelled by the history label.
    static Partition singletons(const HistoryGrid &grid);

    /// One class holding every history.
    static Partition whole(const HistoryGrid &grid, std::string label = "all");

    /// Groups histories that agree on the alternatives of `kept_sets`,
    /// summing over every other set. Labels list the kept alternatives,
    /// latest first.
    static Partition by_sets(const HistoryGrid &grid,
                             const std::vector<std::size_t> &kept_sets);

    [[nodiscard]] const std::vector<std::vector<HistoryIndex>> &classes() const noexcept {
        return classes_;
    }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return classes_.size(); }

    /// Throws InvalidPartition unless the classes are nonempty, disjoint and
    /// cover every history of `grid`.
    void validate_for(const HistoryGrid &grid) const;

  private:
    std::vector<std::vector<HistoryIndex>> classes_;
    std::vector<std::string> labels_;
};

} // namespace dhq
