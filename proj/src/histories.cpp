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
#include "dhq/histories.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

namespace dhq {

namespace {

std::string fmt_time(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// AlternativeSet

AlternativeSet::AlternativeSet(double time, std::vector<Projector> projectors,
                               std::string label)
    : time_(time), projectors_(std::move(projectors)), label_(std::move(label)) {
    if (!std::isfinite(time_)) {
        throw ValidationError("alternative_set.time",
                              "set '" + label_ + "' has a non-finite time");
    }
    if (projectors_.empty()) {
        throw ValidationError("alternative_set.nonempty",
                              "set '" + label_ + "' has no alternatives");
    }
    const std::size_t d = projectors_.front().dim();
    const std::size_t trailing = projectors_.front().trailing_dim();
    bool same_layout = true;
    std::set<std::string> names;
    for (const auto &p : projectors_) {
        if (p.dim() != d) {
            throw DimensionMismatch("set '" + label_ +
                                    "': alternatives differ in dimension");
        }
        same_layout = same_layout && p.trailing_dim() == trailing;
        if (!names.insert(p.name()).second) {
            throw ValidationError("alternative_set.unique_names",
                                  "set '" + label_ + "' repeats alternative '" +
                                      p.name() + "'");
        }
    }
    ComplexMatrix sum;
    if (same_layout) {
        sum = ComplexMatrix::Zero(projectors_.front().local().rows(),
                                  projectors_.front().local().cols());
        for (const auto &p : projectors_) {
            sum += p.local();
        }
    } else {
        const auto n = static_cast<Eigen::Index>(d);
        sum = ComplexMatrix::Zero(n, n);
        for (const auto &p : projectors_) {
            sum += p.matrix();
        }
    }
    sum -= ComplexMatrix::Identity(sum.rows(), sum.cols());
    if (max_abs(sum) > kTolAlg) {
        std::ostringstream os;
        os << "set '" << label_ << "': alternatives do not sum to the identity "
           << "(deviation " << max_abs(sum) << ")";
        throw ValidationError("alternative_set.completeness", os.str());
    }
    for (std::size_t a = 0; a < projectors_.size(); ++a) {
        for (std::size_t b = a + 1; b < projectors_.size(); ++b) {
            const ComplexMatrix prod =
                projector_product(projectors_[a], projectors_[b], nullptr);
            if (max_abs(prod) > kTolAlg) {
                throw ValidationError("alternative_set.exclusive",
                                      "set '" + label_ + "': alternatives '" +
                                          projectors_[a].name() + "' and '" +
                                          projectors_[b].name() +
                                          "' are not orthogonal");
            }
        }
    }
}

std::optional<std::size_t> AlternativeSet::find(std::string_view name) const {
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        if (projectors_[i].name() == name) {
            return i;
        }
    }
    return std::nullopt;
}

AlternativeSet AlternativeSet::at_time(double time) const {
    AlternativeSet copy = *this;
    copy.time_ = time;
    return copy;
}

// ---------------------------------------------------------------------------
// HistoryGrid

struct HistoryGrid::Cache {
    explicit Cache(std::size_t sets) : once(sets), evolved(sets) {}
    std::vector<std::once_flag> once;
    std::vector<std::vector<ComplexMatrix>> evolved;
};

HistoryGrid::HistoryGrid(std::vector<AlternativeSet> sets, Hamiltonian hamiltonian,
                         StateVector initial_state, GridOptions options)
    : sets_(std::move(sets)), hamiltonian_(std::move(hamiltonian)),
      psi_(std::move(initial_state)), options_(options) {
    if (sets_.empty()) {
        throw ValidationError("grid.nonempty", "grid has no alternative sets");
    }
    if (!psi_.is_normalized()) {
        const double n = std::sqrt(psi_.squared_norm());
        if (std::abs(n - 1.0) > kTolNorm) {
            throw ValidationError("state.normalized",
                                  "initial state is not normalized (norm " +
                                      fmt_time(n) + ")");
        }
        psi_ = StateVector::normalized(psi_.amplitudes());
    }
    if (hamiltonian_.dim() != psi_.dim()) {
        throw DimensionMismatch("Hamiltonian dimension " +
                                std::to_string(hamiltonian_.dim()) +
                                " differs from state dimension " +
                                std::to_string(psi_.dim()));
    }
    for (std::size_t k = 0; k < sets_.size(); ++k) {
        if (sets_[k].dim() != psi_.dim()) {
            throw DimensionMismatch("set '" + sets_[k].label() + "' has dimension " +
                                    std::to_string(sets_[k].dim()) +
                                    ", state has " + std::to_string(psi_.dim()));
        }
        if (k > 0 && !(sets_[k].time() > sets_[k - 1].time())) {
            throw ValidationError("grid.times_increasing",
                                  "set '" + sets_[k].label() + "' at t=" +
                                      fmt_time(sets_[k].time()) +
                                      " does not follow t=" +
                                      fmt_time(sets_[k - 1].time()));
        }
    }
    cache_ = std::make_shared<Cache>(sets_.size());
}

std::vector<double> HistoryGrid::times() const {
    std::vector<double> out;
    out.reserve(sets_.size());
    for (const auto &s : sets_) {
        out.push_back(s.time());
    }
    return out;
}

std::size_t HistoryGrid::history_count() const noexcept {
    std::size_t count = 1;
    for (const auto &s : sets_) {
        if (count > std::numeric_limits<std::size_t>::max() / s.size()) {
            return std::numeric_limits<std::size_t>::max();
        }
        count *= s.size();
    }
    return count;
}

bool HistoryGrid::contains(const HistoryIndex &h) const noexcept {
    if (h.alts.size() != sets_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < sets_.size(); ++k) {
        if (h.alts[k] >= sets_[k].size()) {
            return false;
        }
    }
    return true;
}

std::string HistoryGrid::label(const HistoryIndex &h) const {
    if (!contains(h)) {
        throw ValidationError("history.index", "history index out of range");
    }
    std::string out;
    for (std::size_t k = sets_.size(); k-- > 0;) {
        out += sets_[k][h.alts[k]].name();
        if (k > 0) {
            out += ',';
        }
    }
    return out;
}

const ComplexMatrix &HistoryGrid::heisenberg(std::size_t set, std::size_t alt) const {
    const auto &s = sets_.at(set);
    std::call_once(cache_->once[set], [&] {
        auto &out = cache_->evolved[set];
        out.reserve(s.size());
        if (hamiltonian_.is_zero() || s.time() == 0.0) {
            for (const auto &p : s.projectors()) {
                out.push_back(p.matrix());
            }
            return;
        }
        const ComplexMatrix u = hamiltonian_.propagator(s.time());
        for (const auto &p : s.projectors()) {
            out.push_back(u.adjoint() * p.matrix() * u);
        }
    });
    return cache_->evolved[set].at(alt);
}

HistoryGrid HistoryGrid::with_options(GridOptions options) const {
    HistoryGrid g = *this;
    g.options_ = options;
    return g;
}

// ---------------------------------------------------------------------------
// Operations

std::vector<HistoryIndex> enumerate_histories(const HistoryGrid &grid) {
    const std::size_t count = grid.history_count();
    if (count > grid.options().max_histories) {
        throw GridTooLarge("grid has " +
                           (count == std::numeric_limits<std::size_t>::max()
                                ? std::string("more than 2^64")
                                : std::to_string(count)) +
                           " histories, cap is " +
                           std::to_string(grid.options().max_histories));
    }
    const std::size_t n = grid.set_count();
    std::vector<HistoryIndex> out;
    out.reserve(count);
    HistoryIndex cur{std::vector<std::size_t>(n, 0)};
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(cur);
        // Odometer increment, last set fastest.
        for (std::size_t k = n; k-- > 0;) {
            if (++cur.alts[k] < grid.set(k).size()) {
                break;
            }
            cur.alts[k] = 0;
        }
    }
    return out;
}

ComplexMatrix class_operator(const HistoryGrid &grid, const HistoryIndex &h) {
    if (!grid.contains(h)) {
        throw ValidationError("history.index", "history index out of range");
    }
    const auto d = static_cast<Eigen::Index>(grid.dim());
    ComplexMatrix c = ComplexMatrix::Identity(d, d);
    for (std::size_t k = 0; k < grid.set_count(); ++k) {
        c = grid.heisenberg(k, h.alts[k]) * c;
    }
    return c;
}

StateVector branch_vector(const HistoryGrid &grid, const HistoryIndex &h) {
    if (!grid.contains(h)) {
        throw ValidationError("history.index", "history index out of range");
    }
    const auto &ham = grid.hamiltonian();
    ComplexVector w = grid.initial_state().amplitudes();
    double now = 0.0;
    for (std::size_t k = 0; k < grid.set_count(); ++k) {
        const auto &s = grid.set(k);
        w = ham.propagate(w, s.time() - now);
        now = s.time();
        w = s[h.alts[k]].apply(w);
    }
    return StateVector(ham.propagate(w, -now));
}

std::vector<ComplexVector> branch_vectors(const HistoryGrid &grid) {
    const auto histories = enumerate_histories(grid);
    const std::size_t n = grid.set_count();
    const auto &ham = grid.hamiltonian();
    std::vector<ComplexVector> out;
    out.reserve(histories.size());

    // Depth-first walk in enumeration order; level k holds the Schroedinger
    // picture state just after the projection at t_k.
    std::vector<ComplexVector> level(n + 1);
    level[0] = grid.initial_state().amplitudes();
    std::vector<double> when(n + 1, 0.0);
    auto walk = [&](auto &&self, std::size_t k) -> void {
        if (k == n) {
            out.push_back(ham.propagate(level[n], -when[n]));
            return;
        }
        const auto &s = grid.set(k);
        const ComplexVector moved = ham.propagate(level[k], s.time() - when[k]);
        for (std::size_t a = 0; a < s.size(); ++a) {
            level[k + 1] = s[a].apply(moved);
            when[k + 1] = s.time();
            self(self, k + 1);
        }
    };
    walk(walk, 0);
    return out;
}

std::size_t history_ordinal(const HistoryGrid &grid, const HistoryIndex &h) {
    if (!grid.contains(h)) {
        throw ValidationError("history.index", "history index out of range");
    }
    std::size_t pos = 0;
    for (std::size_t k = 0; k < grid.set_count(); ++k) {
        pos = pos * grid.set(k).size() + h.alts[k];
    }
    return pos;
}

std::vector<HistoryIndex> histories_with(const HistoryGrid &grid, std::size_t set,
                                         std::size_t alt) {
    std::vector<HistoryIndex> out;
    for (auto &h : enumerate_histories(grid)) {
        if (h.alts.at(set) == alt) {
            out.push_back(std::move(h));
        }
    }
    return out;
}

AlternativeRef resolve_alternative(const HistoryGrid &grid, std::string_view ref) {
    const auto at = ref.rfind('@');
    const std::string_view name = at == std::string_view::npos ? ref : ref.substr(0, at);
    std::optional<double> time;
    if (at != std::string_view::npos) {
        const std::string t(ref.substr(at + 1));
        try {
            std::size_t used = 0;
            time = std::stod(t, &used);
            if (used != t.size()) {
                throw std::invalid_argument(t);
            }
        } catch (const std::exception &) {
            throw ValidationError("reference.time",
                                  "cannot parse time in '" + std::string(ref) + "'");
        }
    }
    std::optional<AlternativeRef> found;
    for (std::size_t k = 0; k < grid.set_count(); ++k) {
        const auto &s = grid.set(k);
        if (time && std::abs(s.time() - *time) > 1e-9 * std::max(1.0, std::abs(*time))) {
            continue;
        }
        if (auto a = s.find(name)) {
            if (found) {
                throw ValidationError("reference.ambiguous",
                                      "'" + std::string(ref) +
                                          "' matches alternatives at several times");
            }
            found = AlternativeRef{k, *a};
        }
    }
    if (!found) {
        throw ValidationError("reference.unknown",
                              "no alternative matches '" + std::string(ref) + "'");
    }
    return *found;
}

} // namespace dhq
