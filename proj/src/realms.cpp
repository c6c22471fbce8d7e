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
#include "dhq/realms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dhq {

// ---------------------------------------------------------------------------
// Coarse-graining

CoarseGraining coarse_grain(const HistoryGrid &grid, const Partition &partition,
                            const DecoherenceOptions &options) {
    partition.validate_for(grid);
    const auto histories = enumerate_histories(grid);
    const auto branches = branch_vectors(grid);
    std::vector<std::string> fine_labels;
    fine_labels.reserve(histories.size());
    for (const auto &h : histories) {
        fine_labels.push_back(grid.label(h));
    }
    const auto fine = decoherence_from_branches(branches, std::move(fine_labels), options);

    const auto d = static_cast<Eigen::Index>(grid.dim());
    const bool dense = grid.dim() <= kDenseClassOperatorLimit;
    std::vector<ComplexVector> coarse_branches;
    std::vector<ComplexMatrix> class_ops;
    std::size_t largest_class = 1;
    for (const auto &cls : partition.classes()) {
        ComplexVector sum = ComplexVector::Zero(d);
        ComplexMatrix op;
        if (dense) {
            op = ComplexMatrix::Zero(d, d);
        }
        for (const auto &h : cls) {
            sum += branches[history_ordinal(grid, h)];
            if (dense) {
                op += class_operator(grid, h);
            }
        }
        coarse_branches.push_back(std::move(sum));
        if (dense) {
            class_ops.push_back(std::move(op));
        }
        largest_class = std::max(largest_class, cls.size());
    }
    auto report = decoherence_from_branches(coarse_branches, partition.labels(), options);

    // Decoherence of the fine set bounds every coarse normalized off-diagonal
    // by sqrt(|A||B|) tol (Cauchy-Schwarz over the summed overlaps).
    if (fine.decoherent) {
        const double bound = 2.0 * static_cast<double>(largest_class) * options.tol_dec + 1e-6;
        if (report.max_offdiag_normalized > bound) {
            std::ostringstream os;
            os << "coarse_grain: coarse off-diagonal " << report.max_offdiag_normalized
               << " exceeds the bound " << bound << " implied by fine decoherence";
            throw std::logic_error(os.str());
        }
    }
    return CoarseGraining{partition, std::move(class_ops), std::move(report)};
}

// ---------------------------------------------------------------------------
// Refinement join

namespace {

std::string join_name(const std::string &a, const std::string &b) {
    return a == b ? a : a + "&" + b;
}

bool same_time(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
}

void require_same_system(const HistoryGrid &a, const HistoryGrid &b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("grids have dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()));
    }
    if (!a.hamiltonian().same_as(b.hamiltonian())) {
        throw DimensionMismatch("grids have different Hamiltonians");
    }
    if (max_abs(ComplexVector(a.initial_state().amplitudes() -
                              b.initial_state().amplitudes())) > kTolAlg) {
        throw DimensionMismatch("grids have different initial states");
    }
}

struct Origin {
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::size_t a_set = none;
    std::size_t b_set = none;
    std::vector<std::size_t> a_alt;  // per joint alternative
    std::vector<std::size_t> b_alt;
};

Partition marginal(const HistoryGrid &joint, const HistoryGrid &input,
                   const std::vector<Origin> &origins, bool use_a) {
    std::map<HistoryIndex, std::vector<HistoryIndex>> groups;
    for (auto &h : enumerate_histories(joint)) {
        HistoryIndex key{std::vector<std::size_t>(input.set_count(), 0)};
        for (std::size_t k = 0; k < origins.size(); ++k) {
            const auto &o = origins[k];
            const std::size_t s = use_a ? o.a_set : o.b_set;
            if (s != Origin::none) {
                key.alts[s] = (use_a ? o.a_alt : o.b_alt)[h.alts[k]];
            }
        }
        groups[key].push_back(std::move(h));
    }
    std::vector<std::vector<HistoryIndex>> classes;
    std::vector<std::string> labels;
    for (auto &[key, members] : groups) {
        labels.push_back(input.label(key));
        classes.push_back(std::move(members));
    }
    return Partition(std::move(classes), std::move(labels));
}

} // namespace

RefinementJoin refine_join(const HistoryGrid &a, const HistoryGrid &b) {
    require_same_system(a, b);
    std::vector<AlternativeSet> sets;
    std::vector<Origin> origins;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.set_count() || j < b.set_count()) {
        const bool take_a = j >= b.set_count() ||
                            (i < a.set_count() && a.set(i).time() < b.set(j).time() &&
                             !same_time(a.set(i).time(), b.set(j).time()));
        const bool take_b = i >= a.set_count() ||
                            (j < b.set_count() && b.set(j).time() < a.set(i).time() &&
                             !same_time(a.set(i).time(), b.set(j).time()));
        Origin o;
        if (take_a) {
            const auto &s = a.set(i);
            o.a_set = i;
            for (std::size_t x = 0; x < s.size(); ++x) {
                o.a_alt.push_back(x);
            }
            sets.push_back(s);
            ++i;
        } else if (take_b) {
            const auto &s = b.set(j);
            o.b_set = j;
            for (std::size_t x = 0; x < s.size(); ++x) {
                o.b_alt.push_back(x);
            }
            sets.push_back(s);
            ++j;
        } else {
            const auto &sa = a.set(i);
            const auto &sb = b.set(j);
            double worst = 0.0;
            for (const auto &p : sa.projectors()) {
                for (const auto &q : sb.projectors()) {
                    worst = std::max(worst, commutator_norm(p, q));
                }
            }
            if (worst > kTolAlg) {
                std::ostringstream os;
                os << "sets '" << sa.label() << "' and '" << sb.label() << "' at t="
                   << sa.time() << " do not commute (max commutator " << worst << ")";
                throw NonCommutingSets(os.str(), worst);
            }
            std::vector<Projector> products;
            o.a_set = i;
            o.b_set = j;
            for (std::size_t x = 0; x < sa.size(); ++x) {
                for (std::size_t y = 0; y < sb.size(); ++y) {
                    std::size_t trailing = 1;
                    ComplexMatrix m = projector_product(sa[x], sb[y], &trailing);
                    if (max_abs(m) < kZeroProduct) {
                        continue;
                    }
                    // Symmetrize away rounding from the product of commuting
                    // projectors before validation.
                    m = 0.5 * (m + m.adjoint());
                    products.emplace_back(std::move(m), join_name(sa[x].name(), sb[y].name()),
                                          trailing);
                    o.a_alt.push_back(x);
                    o.b_alt.push_back(y);
                }
            }
            sets.emplace_back(sa.time(), std::move(products),
                              join_name(sa.label(), sb.label()));
            ++i;
            ++j;
        }
        origins.push_back(std::move(o));
    }
    HistoryGrid joint(std::move(sets), a.hamiltonian(), a.initial_state(), a.options());
    auto onto_a = marginal(joint, a, origins, true);
    auto onto_b = marginal(joint, b, origins, false);
    return RefinementJoin{std::move(joint), std::move(onto_a), std::move(onto_b)};
}

// ---------------------------------------------------------------------------
// Realms and compatibility

Realm::Realm(HistoryGrid grid, const DecoherenceOptions &options)
    : grid_(std::move(grid)), options_(options) {
    report_ = decoherence_functional(grid_, options_);
    if (!report_.decoherent) {
        throw NotDecoherent(report_);
    }
}

const char *to_string(Compatibility c) noexcept {
    switch (c) {
    case Compatibility::compatible:
        return "compatible";
    case Compatibility::incompatible:
        return "incompatible";
    case Compatibility::undetermined:
        return "undetermined";
    }
    return "undetermined";
}

CompatibilityVerdict check_compatibility(const Realm &a, const Realm &b) {
    require_same_system(a.grid(), b.grid());
    CompatibilityVerdict v;
    std::optional<RefinementJoin> join;
    try {
        join = refine_join(a.grid(), b.grid());
    } catch (const NonCommutingSets &e) {
        v.status = Compatibility::undetermined;
        v.commutator_norm = e.commutator_norm();
        v.reason = e.what();
        return v;
    }
    DecoherenceOptions opts = a.options();
    opts.tol_dec = std::min(a.options().tol_dec, b.options().tol_dec);
    auto report = decoherence_functional(join->grid, opts);
    v.status = report.decoherent ? Compatibility::compatible : Compatibility::incompatible;
    v.reason = report.decoherent
                   ? "the commuting refinement join decoheres"
                   : "the commuting refinement join does not decohere";
    v.joint = std::move(join->grid);
    v.joint_report = std::move(report);
    return v;
}

// ---------------------------------------------------------------------------
// Conditional probabilities

double conditional_probability(const HistoryGrid &grid,
                               const std::vector<HistoryIndex> &target,
                               const std::vector<HistoryIndex> &given,
                               const DecoherenceOptions &options) {
    auto report = decoherence_functional(grid, options);
    if (!report.decoherent) {
        throw NotDecoherent(std::move(report));
    }
    const std::set<HistoryIndex> given_set(given.begin(), given.end());
    double p_given = 0.0;
    for (const auto &h : given_set) {
        p_given += std::clamp(report.probabilities[history_ordinal(grid, h)], 0.0, 1.0);
    }
    if (p_given <= kProbabilityFloor) {
        throw ConditionOnNull("conditioning on histories of probability " +
                                  std::to_string(p_given),
                              p_given);
    }
    const std::set<HistoryIndex> target_set(target.begin(), target.end());
    double p_joint = 0.0;
    for (const auto &h : target_set) {
        if (given_set.count(h) != 0) {
            p_joint += std::clamp(report.probabilities[history_ordinal(grid, h)], 0.0, 1.0);
        }
    }
    return p_joint / p_given;
}

namespace {

ConditionalTable conditional_table(const HistoryGrid &grid, AlternativeRef data,
                                   const DecoherenceOptions &options,
                                   bool retrodiction) {
    const std::size_t n = grid.set_count();
    if (data.set >= n || data.alt >= grid.set(data.set).size()) {
        throw ValidationError("reference.unknown", "data alternative out of range");
    }
    if (n < 2) {
        throw ValidationError("conditional.ordering",
                              "no alternatives besides the data set");
    }
    const std::size_t expected = retrodiction ? n - 1 : 0;
    if (data.set != expected) {
        throw ValidationError(
            "conditional.ordering",
            retrodiction ? "retrodiction needs every other set earlier than the data"
                         : "prediction needs every other set later than the data");
    }
    auto report = decoherence_functional(grid, options);
    if (!report.decoherent) {
        throw NotDecoherent(std::move(report));
    }
    const auto &dset = grid.set(data.set);
    const auto &ham = grid.hamiltonian();
    // |P_d(t0) Psi| = |P_d e^{-iH t0} Psi| since e^{+iH t0} is unitary.
    const double pd =
        dset[data.alt].apply(ham.propagate(grid.initial_state().amplitudes(), dset.time()))
            .squaredNorm();

    ConditionalTable table;
    table.data_label = dset[data.alt].name() + "@" + [&] {
        std::ostringstream os;
        os << dset.time();
        return os.str();
    }();
    table.data_probability = pd;
    if (pd <= kProbabilityFloor) {
        throw ConditionOnNull("data " + table.data_label + " has probability " +
                                  std::to_string(pd),
                              pd);
    }
    const auto histories = enumerate_histories(grid);
    for (std::size_t i = 0; i < histories.size(); ++i) {
        const auto &h = histories[i];
        if (h.alts[data.set] != data.alt) {
            continue;
        }
        ConditionalEntry e;
        std::string label;
        for (std::size_t k = n; k-- > 0;) {
            if (k == data.set) {
                continue;
            }
            if (!label.empty()) {
                label += ',';
            }
            label += grid.set(k)[h.alts[k]].name();
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (k != data.set) {
                e.alts.push_back(h.alts[k]);
            }
        }
        e.label = std::move(label);
        e.probability = std::max(0.0, report.probabilities[i]) / pd;
        table.total += e.probability;
        table.entries.push_back(std::move(e));
    }
    table.report = std::move(report);
    return table;
}

} // namespace

ConditionalTable retrodict(const HistoryGrid &grid, AlternativeRef data,
                           const DecoherenceOptions &options) {
    return conditional_table(grid, data, options, true);
}

ConditionalTable predict(const HistoryGrid &grid, AlternativeRef data,
                         const DecoherenceOptions &options) {
    return conditional_table(grid, data, options, false);
}

} // namespace dhq
