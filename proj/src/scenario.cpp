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
#include "dhq/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dhq {

using Json = nlohmann::ordered_json;

const Partition *Scenario::partition(const std::string &name) const {
    for (const auto &[n, p] : partitions) {
        if (n == name) {
            return &p;
        }
    }
    return nullptr;
}

namespace {

// ---------------------------------------------------------------------------
// Reading

[[noreturn]] void fail(const std::string &where, const std::string &what) {
    throw ParseError(what + " at " + (where.empty() ? "/" : where), where);
}

const Json &member(const Json &obj, const std::string &where, const char *key) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(where, std::string("missing field '") + key + "'");
    }
    return *it;
}

double number(const Json &j, const std::string &where) {
    if (!j.is_number()) {
        fail(where, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(where, "number is not finite");
    }
    return v;
}

std::size_t count(const Json &j, const std::string &where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(where, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::string text(const Json &j, const std::string &where) {
    if (!j.is_string()) {
        fail(where, "expected a string");
    }
    return j.get<std::string>();
}

const Json &array(const Json &j, const std::string &where) {
    if (!j.is_array()) {
        fail(where, "expected an array");
    }
    return j;
}

std::string at(const std::string &where, std::size_t i) {
    return where + "/" + std::to_string(i);
}

std::string at(const std::string &where, const std::string &key) {
    // JSON pointer escaping.
    std::string k;
    for (char c : key) {
        if (c == '~') {
            k += "~0";
        } else if (c == '/') {
            k += "~1";
        } else {
            k += c;
        }
    }
    return where + "/" + k;
}

/// [re, im] or a bare real.
Complex scalar(const Json &j, const std::string &where) {
    if (j.is_number()) {
        return {number(j, where), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        fail(where, "expected a complex number [re, im]");
    }
    return {number(j[0], at(where, 0)), number(j[1], at(where, 1))};
}

ComplexVector vector(const Json &j, const std::string &where) {
    array(j, where);
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = scalar(j[i], at(where, i));
    }
    return v;
}

ComplexMatrix matrix(const Json &j, const std::string &where) {
    array(j, where);
    if (j.empty()) {
        fail(where, "matrix is empty");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = array(j[0], at(where, 0)).size();
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row_at = at(where, r);
        const auto &row = array(j[r], row_at);
        if (row.size() != cols) {
            fail(row_at, "ragged matrix row");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                scalar(row[c], at(row_at, c));
        }
    }
    return m;
}

/// Runs `f`, attaching `where` to any engine error it throws.
template <typename F> auto located(const std::string &where, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError &e) {
        throw ValidationError(e.invariant(), std::string(e.what()) + " at " + where, where);
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        throw ValidationError(e.kind(), std::string(e.what()) + " at " + where, where);
    }
}

Hamiltonian read_hamiltonian(const Json &j, const std::string &where, std::size_t dim) {
    if (j.is_string()) {
        if (j.get<std::string>() != "zero") {
            fail(where, "hamiltonian must be \"zero\" or an object");
        }
        return Hamiltonian::zero(dim);
    }
    if (!j.is_object()) {
        fail(where, "hamiltonian must be \"zero\" or an object");
    }
    if (j.contains("matrix")) {
        const auto loc = at(where, "matrix");
        const auto m = matrix(j["matrix"], loc);
        return located(loc, [&] { return Hamiltonian(m); });
    }
    if (j.contains("conditional_qubits")) {
        const auto loc = at(where, "conditional_qubits");
        const auto &cq = j["conditional_qubits"];
        ConditionalQubitTerms terms;
        terms.control_dim = count(member(cq, loc, "control_dim"), at(loc, "control_dim"));
        terms.env_qubits = count(member(cq, loc, "env_qubits"), at(loc, "env_qubits"));
        const auto gloc = at(loc, "generators");
        const auto &gens = array(member(cq, loc, "generators"), gloc);
        for (std::size_t c = 0; c < gens.size(); ++c) {
            const auto cl = at(gloc, c);
            std::vector<Eigen::Matrix2cd> row;
            for (std::size_t k = 0; k < array(gens[c], cl).size(); ++k) {
                const auto m = matrix(gens[c][k], at(cl, k));
                if (m.rows() != 2 || m.cols() != 2) {
                    fail(at(cl, k), "generator must be 2x2");
                }
                row.emplace_back(m);
            }
            terms.generators.push_back(std::move(row));
        }
        return located(loc, [&] { return Hamiltonian::conditional_qubits(std::move(terms)); });
    }
    fail(where, "hamiltonian object needs 'matrix' or 'conditional_qubits'");
}

Projector read_projector(const Json &j, const std::string &where) {
    const std::string name = text(member(j, where, "name"), at(where, "name"));
    std::size_t trailing = 1;
    if (j.contains("trailing_dim")) {
        trailing = count(j["trailing_dim"], at(where, "trailing_dim"));
    }
    if (j.contains("matrix")) {
        const auto loc = at(where, "matrix");
        const auto m = matrix(j["matrix"], loc);
        return located(loc, [&] { return Projector(m, name, trailing); });
    }
    if (j.contains("span")) {
        const auto loc = at(where, "span");
        std::vector<ComplexVector> vs;
        for (std::size_t i = 0; i < array(j["span"], loc).size(); ++i) {
            vs.push_back(vector(j["span"][i], at(loc, i)));
        }
        return located(loc, [&] { return projector_from_span(vs, name, trailing); });
    }
    fail(where, "alternative needs 'matrix' or 'span'");
}

Partition read_partition(const Json &j, const std::string &where, const HistoryGrid &grid) {
    const auto cloc = at(where, "classes");
    const auto &classes = array(member(j, where, "classes"), cloc);
    std::vector<std::vector<HistoryIndex>> out;
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto loc = at(cloc, c);
        const auto &cls = classes[c];
        labels.push_back(cls.contains("label") ? text(cls["label"], at(loc, "label")) : "");
        const auto hloc = at(loc, "histories");
        const auto &hs = array(member(cls, loc, "histories"), hloc);
        std::vector<HistoryIndex> members;
        for (std::size_t h = 0; h < hs.size(); ++h) {
            const auto one = at(hloc, h);
            const auto &names = array(hs[h], one);
            if (names.size() != grid.set_count()) {
                fail(one, "history needs one alternative name per set, in time order");
            }
            HistoryIndex idx;
            for (std::size_t k = 0; k < names.size(); ++k) {
                const auto name = text(names[k], at(one, k));
                const auto alt = grid.set(k).find(name);
                if (!alt) {
                    throw ValidationError("reference.unknown",
                                          "no alternative '" + name + "' in set '" +
                                              grid.set(k).label() + "' at " + at(one, k),
                                          at(one, k));
                }
                idx.alts.push_back(*alt);
            }
            members.push_back(std::move(idx));
        }
        out.push_back(std::move(members));
    }
    return located(where, [&] {
        Partition p(std::move(out), std::move(labels));
        p.validate_for(grid);
        return p;
    });
}

// ---------------------------------------------------------------------------
// Writing

Json write_scalar(Complex z) { return Json::array({z.real(), z.imag()}); }

template <typename M> Json write_matrix(const M &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(write_scalar(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json write_hamiltonian(const Hamiltonian &h) {
    if (h.is_zero()) {
        return "zero";
    }
    if (const auto *s = h.structured()) {
        Json gens = Json::array();
        for (const auto &row : s->generators) {
            Json r = Json::array();
            for (const auto &g : row) {
                r.push_back(write_matrix(g));
            }
            gens.push_back(std::move(r));
        }
        Json cq = Json::object();
        cq["control_dim"] = s->control_dim;
        cq["env_qubits"] = s->env_qubits;
        cq["generators"] = std::move(gens);
        return Json{{"conditional_qubits", std::move(cq)}};
    }
    return Json{{"matrix", write_matrix(h.matrix())}};
}

} // namespace

Scenario parse_scenario(const std::string &text_in) {
    Json root;
    try {
        root = Json::parse(text_in);
    } catch (const Json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), "");
    }
    if (!root.is_object()) {
        fail("", "scenario must be a JSON object");
    }
    if (root.contains("schema") && text(root["schema"], "/schema") != kScenarioSchema) {
        fail("/schema", std::string("unsupported schema (expected ") + kScenarioSchema + ")");
    }
    const std::size_t dim = count(member(root, "", "dimension"), "/dimension");
    if (dim == 0) {
        fail("/dimension", "dimension must be positive");
    }
    auto ham = read_hamiltonian(member(root, "", "hamiltonian"), "/hamiltonian", dim);
    if (ham.dim() != dim) {
        throw ValidationError("grid.dimension", "hamiltonian dimension does not match",
                              "/hamiltonian");
    }
    const auto psi_vec = vector(member(root, "", "initial_state"), "/initial_state");
    if (static_cast<std::size_t>(psi_vec.size()) != dim) {
        throw ValidationError("grid.dimension", "initial_state dimension does not match",
                              "/initial_state");
    }
    auto psi = located("/initial_state", [&] { return StateVector::normalized(psi_vec); });

    const auto &sets_json = array(member(root, "", "alternative_sets"), "/alternative_sets");
    std::vector<AlternativeSet> sets;
    for (std::size_t s = 0; s < sets_json.size(); ++s) {
        const auto loc = at("/alternative_sets", s);
        const auto &sj = sets_json[s];
        const double time = number(member(sj, loc, "time"), at(loc, "time"));
        const std::string label =
            sj.contains("label") ? text(sj["label"], at(loc, "label")) : "set" + std::to_string(s);
        const auto aloc = at(loc, "alternatives");
        const auto &alts = array(member(sj, loc, "alternatives"), aloc);
        std::vector<Projector> ps;
        for (std::size_t a = 0; a < alts.size(); ++a) {
            auto p = read_projector(alts[a], at(aloc, a));
            if (p.dim() != dim) {
                throw ValidationError("grid.dimension",
                                      "projector dimension does not match at " + at(aloc, a),
                                      at(aloc, a));
            }
            ps.push_back(std::move(p));
        }
        sets.push_back(located(loc, [&] {
            try {
                return AlternativeSet(time, std::move(ps), label);
            } catch (const ValidationError &e) {
                throw ValidationError(e.invariant(),
                                      "set '" + label + "': " + std::string(e.what()));
            }
        }));
    }
    HistoryGrid grid = located("/alternative_sets", [&] {
        return HistoryGrid(std::move(sets), std::move(ham), std::move(psi));
    });

    Scenario sc{std::move(grid), {}, std::nullopt};
    if (root.contains("partitions")) {
        const auto &parts = root["partitions"];
        if (!parts.is_object()) {
            fail("/partitions", "expected an object of named partitions");
        }
        for (const auto &[name, pj] : parts.items()) {
            sc.partitions.emplace_back(name, read_partition(pj, at("/partitions", name), sc.grid));
        }
    }
    if (root.contains("data_projector")) {
        auto ref = text(root["data_projector"], "/data_projector");
        located("/data_projector", [&] { return resolve_alternative(sc.grid, ref); });
        sc.data_projector = std::move(ref);
    }
    return sc;
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read scenario file '" + path + "'", "");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario &sc) {
    const auto &grid = sc.grid;
    Json root = Json::object();
    root["schema"] = kScenarioSchema;
    root["dimension"] = grid.dim();
    root["hamiltonian"] = write_hamiltonian(grid.hamiltonian());
    Json psi = Json::array();
    for (Eigen::Index i = 0; i < grid.initial_state().amplitudes().size(); ++i) {
        psi.push_back(write_scalar(grid.initial_state().amplitudes()(i)));
    }
    root["initial_state"] = std::move(psi);
    Json sets = Json::array();
    for (const auto &s : grid.sets()) {
        Json alts = Json::array();
        for (const auto &p : s.projectors()) {
            Json a = Json::object();
            a["name"] = p.name();
            a["matrix"] = write_matrix(p.local());
            if (p.trailing_dim() != 1) {
                a["trailing_dim"] = p.trailing_dim();
            }
            alts.push_back(std::move(a));
        }
        Json sj = Json::object();
        sj["label"] = s.label();
        sj["time"] = s.time();
        sj["alternatives"] = std::move(alts);
        sets.push_back(std::move(sj));
    }
    root["alternative_sets"] = std::move(sets);
    if (!sc.partitions.empty()) {
        Json parts = Json::object();
        for (const auto &[name, p] : sc.partitions) {
            Json classes = Json::array();
            for (std::size_t c = 0; c < p.size(); ++c) {
                Json hs = Json::array();
                for (const auto &h : p.classes()[c]) {
                    Json names = Json::array();
                    for (std::size_t k = 0; k < h.alts.size(); ++k) {
                        names.push_back(grid.set(k)[h.alts[k]].name());
                    }
                    hs.push_back(std::move(names));
                }
                classes.push_back(Json{{"label", p.labels()[c]}, {"histories", std::move(hs)}});
            }
            parts[name] = Json{{"classes", std::move(classes)}};
        }
        root["partitions"] = std::move(parts);
    }
    if (sc.data_projector) {
        root["data_projector"] = *sc.data_projector;
    }
    return root.dump(2) + "\n";
}

} // namespace dhq
