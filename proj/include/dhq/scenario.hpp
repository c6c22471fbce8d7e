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
 * Scenario files (schema "dhq-scenario/1"): a history grid plus named
 * partitions and an optional data projector reference.
 *
 * Complex scalars are [re, im] pairs and matrices are row-major arrays of
 * rows. Every parse or validation error carries a JSON pointer to the
 * offending value.
 */
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhq/partition.hpp"

namespace dhq {

inline constexpr const char *kScenarioSchema = "dhq-scenario/1";

struct Scenario {
    HistoryGrid grid;
    /// Named coarse-grainings, in file order.
    std::vector<std::pair<std::string, Partition>> partitions;
    /// "NAME@TIME" or "NAME" reference used by retrodict/predict.
    std::optional<std::string> data_projector;

    [[nodiscard]] const Partition *partition(const std::string &name) const;
};

/// Throws ParseError (malformed JSON or schema) or ValidationError
/// (grid invariants), both with JSON-pointer locations.
[[nodiscard]] Scenario parse_scenario(const std::string &text);

/// Reads and parses a file. Throws ParseError when it cannot be read.
[[nodiscard]] Scenario load_scenario(const std::string &path);

/// Serializes with enough digits to reparse to an identical grid.
[[nodiscard]] std::string dump_scenario(const Scenario &scenario);

} // namespace dhq
