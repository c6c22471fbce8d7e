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
#include "dhq/partition.hpp"

#include <map>
#include <set>

namespace dhq {

Partition::Partition(std::vector<std::vector<HistoryIndex>> classes,
                     std::vector<std::string> labels)
    : classes_(std::move(classes)), labels_(std::move(labels)) {
    if (labels_.empty()) {
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            labels_.push_back("class" + std::to_string(i));
        }
    }
    if (labels_.size() != classes_.size()) {
        throw InvalidPartition("partition has " + std::to_string(classes_.size()) +
                               " classes but " + std::to_string(labels_.size()) +
                               " labels");
    }
}

Partition Partition::singletons(const HistoryGrid &grid) {
    std::vector<std::vector<HistoryIndex>> classes;
    std::vector<std::string> labels;
    for (auto &h : enumerate_histories(grid)) {
        labels.push_back(grid.label(h));
        classes.push_back({std::move(h)});
    }
    return Partition(std::move(classes), std::move(labels));
}

Partition Partition::whole(const HistoryGrid &grid, std::string label) {
    return Partition({enumerate_histories(grid)}, {std::move(label)});
}

Partition Partition::by_sets(const HistoryGrid &grid,
                             const std::vector<std::size_t> &kept_sets) {
    for (auto k : kept_sets) {
        if (k >= grid.set_count()) {
            throw InvalidPartition("partition keeps set " + std::to_string(k) +
                                   " but the grid has " +
                                   std::to_string(grid.set_count()));
        }
    }
    std::set<std::size_t> kept(kept_sets.begin(), kept_sets.end());
    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<std::vector<HistoryIndex>> classes;
    std::vector<std::string> labels;
    for (auto &h : enumerate_histories(grid)) {
        std::vector<std::size_t> key;
        for (auto k : kept) {
            key.push_back(h.alts[k]);
        }
        auto [it, inserted] = slot.emplace(key, classes.size());
        if (inserted) {
            std::string label;
            for (auto k = kept.rbegin(); k != kept.rend(); ++k) {
                if (!label.empty()) {
                    label += ',';
                }
                label += grid.set(*k)[h.alts[*k]].name();
            }
            labels.push_back(label.empty() ? "all" : label);
            classes.emplace_back();
        }
        classes[it->second].push_back(std::move(h));
    }
    return Partition(std::move(classes), std::move(labels));
}

void Partition::validate_for(const HistoryGrid &grid) const {
    const std::size_t total = grid.history_count();
    std::set<HistoryIndex> seen;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        if (classes_[c].empty()) {
            throw InvalidPartition("class '" + labels_[c] + "' is empty");
        }
        for (const auto &h : classes_[c]) {
            if (!grid.contains(h)) {
                throw InvalidPartition("class '" + labels_[c] +
                                       "' holds a history outside the grid");
            }
            if (!seen.insert(h).second) {
                throw InvalidPartition("history " + grid.label(h) +
                                       " appears in more than one class");
            }
        }
    }
    if (seen.size() != total) {
        throw InvalidPartition("partition covers " + std::to_string(seen.size()) +
                               " of " + std::to_string(total) + " histories");
    }
}

} // namespace dhq
