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
#include "dhq/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace dhq {

double normalized_offdiag(Complex dab, double daa, double dbb) {
    if (daa < kOffdiagFloor || dbb < kOffdiagFloor) {
        return 0.0;
    }
    return std::abs(dab) / (std::sqrt(daa * dbb) + kOffdiagFloor);
}

DecoherenceReport decoherence_from_branches(std::span<const ComplexVector> branches,
                                            std::vector<std::string> labels,
                                            const DecoherenceOptions &options) {
    const std::size_t n = branches.size();
    if (labels.size() != n) {
        throw DimensionMismatch("decoherence: " + std::to_string(n) +
                                " branches but " + std::to_string(labels.size()) +
                                " labels");
    }
    DecoherenceReport rep;
    rep.labels = std::move(labels);
    rep.tol_used = options.tol_dec;
    rep.probabilities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.probabilities[i] = branches[i].squaredNorm();
    }

    const bool store = n <= kGramStoreLimit;
    if (store) {
        rep.gram.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    }
    // Row i owns pairs (i, j > i). Each row records its own worst pair and
    // the rows are merged in order afterwards, so the thread count cannot
    // change any result.
    std::vector<double> row_max(n, 0.0);
    std::vector<std::size_t> row_arg(n, 0);
    auto fill_row = [&](std::size_t i) {
        const double dii = rep.probabilities[i];
        if (store) {
            rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
                Complex(dii, 0.0);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex dij = branches[i].dot(branches[j]);
            if (store) {
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                rep.gram(ii, jj) = dij;
                rep.gram(jj, ii) = std::conj(dij);
            }
            const double r = normalized_offdiag(dij, dii, rep.probabilities[j]);
            if (r > row_max[i]) {
                row_max[i] = r;
                row_arg[i] = j;
            }
        }
    };
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            fill_row(i);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += threads) {
                    fill_row(i);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (row_max[i] > rep.max_offdiag_normalized) {
            rep.max_offdiag_normalized = row_max[i];
            rep.worst_pair = std::make_pair(i, row_arg[i]);
        }
    }
    rep.decoherent = rep.max_offdiag_normalized <= options.tol_dec;

    if (store) {
        rep.gram_total = rep.gram.sum().real();
    } else if (n > 0) {
        ComplexVector total = ComplexVector::Zero(branches.front().size());
        for (const auto &b : branches) {
            total += b;
        }
        rep.gram_total = total.squaredNorm();
    }
    return rep;
}

DecoherenceReport decoherence_functional(const HistoryGrid &grid,
                                         const DecoherenceOptions &options) {
    const auto histories = enumerate_histories(grid);
    std::vector<std::string> labels;
    labels.reserve(histories.size());
    for (const auto &h : histories) {
        labels.push_back(grid.label(h));
    }
    const auto branches = branch_vectors(grid);
    return decoherence_from_branches(branches, std::move(labels), options);
}

namespace {

std::string not_decoherent_message(const DecoherenceReport &r) {
    std::ostringstream os;
    os << "set of histories does not decohere: max normalized off-diagonal "
       << r.max_offdiag_normalized << " exceeds tolerance " << r.tol_used;
    if (r.worst_pair) {
        os << " (between " << r.labels[r.worst_pair->first] << " and "
           << r.labels[r.worst_pair->second] << ")";
    }
    return os.str();
}

} // namespace

NotDecoherent::NotDecoherent(DecoherenceReport report)
    : Error("NotDecoherent", not_decoherent_message(report)),
      report_(std::move(report)) {}

std::vector<HistoryProbability> probabilities(const HistoryGrid &grid,
                                              const DecoherenceOptions &options) {
    auto report = decoherence_functional(grid, options);
    if (!report.decoherent) {
        throw NotDecoherent(std::move(report));
    }
    const auto histories = enumerate_histories(grid);
    std::vector<HistoryProbability> out;
    out.reserve(histories.size());
    for (std::size_t i = 0; i < histories.size(); ++i) {
        out.push_back({histories[i], report.labels[i],
                       std::clamp(report.probabilities[i], 0.0, 1.0)});
    }
    return out;
}

double check_sum_rules(const HistoryGrid &grid, const Partition &partition) {
    partition.validate_for(grid);
    const auto branches = branch_vectors(grid);
    double worst = 0.0;
    for (const auto &cls : partition.classes()) {
        ComplexVector sum = ComplexVector::Zero(static_cast<Eigen::Index>(grid.dim()));
        double separate = 0.0;
        for (const auto &h : cls) {
            const auto &b = branches[history_ordinal(grid, h)];
            sum += b;
            separate += b.squaredNorm();
        }
        worst = std::max(worst, std::abs(sum.squaredNorm() - separate));
    }
    return worst;
}

} // namespace dhq
