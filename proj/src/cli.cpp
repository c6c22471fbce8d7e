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
#include "dhq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dhq/models.hpp"
#include "dhq/realms.hpp"
#include "dhq/scenario.hpp"
#include "dhq/spacetime.hpp"

namespace dhq::cli {

using Json = nlohmann::ordered_json;

double report_probability(double p) {
    if (std::abs(p) < 1e-14) {
        return 0.0;
    }
    const double r = std::round(p * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}

namespace {

struct Globals {
    double tol_dec = kDefaultTolDec;
    std::string format = "text";
    std::uint64_t seed = 1;
    unsigned threads = 1;

    [[nodiscard]] DecoherenceOptions options() const { return {tol_dec, threads}; }
};

/// A command's result: the JSON report and its text rendering, built from
/// the same values.
struct Result {
    Json report;
    std::string text;
    int exit_code = kExitOk;
    std::string err;
};

// ---------------------------------------------------------------------------
// Formatting

std::string fixed12(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", report_probability(p));
    return buf;
}

std::string num(double x) {
    if (x == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string time_text(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

Json header(const std::string &command, const Globals &g) {
    Json j = Json::object();
    j["command"] = command;
    j["tol_dec"] = g.tol_dec;
    return j;
}

std::string header_text(const Json &j) {
    return "command: " + j["command"].get<std::string>() +
           "\ntolerance: " + num(j["tol_dec"].get<double>()) + "\n";
}

Json summary(const DecoherenceReport &r) {
    Json j = Json::object();
    j["histories"] = r.size();
    j["decoherent"] = r.decoherent;
    j["max_offdiag_normalized"] = r.max_offdiag_normalized;
    if (r.worst_pair) {
        j["worst_pair"] = Json::array({r.labels[r.worst_pair->first],
                                       r.labels[r.worst_pair->second]});
    } else {
        j["worst_pair"] = nullptr;
    }
    j["gram_total"] = report_probability(r.gram_total);
    return j;
}

std::string summary_text(const Json &j, const std::string &indent = "") {
    std::string s;
    s += indent + "histories: " + std::to_string(j["histories"].get<std::size_t>()) + "\n";
    s += indent + "decoherent: " + yes_no(j["decoherent"].get<bool>()) + "\n";
    s += indent + "max normalized off-diagonal: " +
         num(j["max_offdiag_normalized"].get<double>());
    if (!j["worst_pair"].is_null()) {
        s += " (" + j["worst_pair"][0].get<std::string>() + " vs " +
             j["worst_pair"][1].get<std::string>() + ")";
    }
    s += "\n" + indent + "sum of D: " + fixed12(j["gram_total"].get<double>()) + "\n";
    return s;
}

Json probability_rows(const std::vector<std::string> &labels, const std::vector<double> &ps) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        rows.push_back(Json{{"history", labels[i]},
                            {"probability", report_probability(std::clamp(ps[i], 0.0, 1.0))}});
    }
    return rows;
}

std::string rows_text(const Json &rows, const std::string &suffix = "") {
    std::string s;
    for (const auto &r : rows) {
        s += "  p(" + r["history"].get<std::string>() + suffix +
             ") = " + fixed12(r["probability"].get<double>()) + "\n";
    }
    return s;
}

Json conditional_json(const ConditionalTable &t) {
    Json j = Json::object();
    j["data"] = t.data_label;
    j["data_probability"] = report_probability(t.data_probability);
    Json rows = Json::array();
    for (const auto &e : t.entries) {
        rows.push_back(Json{{"history", e.label}, {"probability", report_probability(e.probability)}});
    }
    j["entries"] = std::move(rows);
    j["total"] = report_probability(t.total);
    return j;
}

std::string conditional_text(const Json &j) {
    const auto data = j["data"].get<std::string>();
    std::string s = "data: " + data + " (p = " + fixed12(j["data_probability"].get<double>()) +
                    ")\n";
    s += rows_text(j["entries"], " | " + data);
    s += "  total = " + fixed12(j["total"].get<double>()) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Scenario commands

std::string data_reference(const Scenario &sc, const std::string &flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (sc.data_projector) {
        return *sc.data_projector;
    }
    throw ValidationError("reference.missing",
                          "no data projector: pass --data NAME@T or set data_projector");
}

Result not_decoherent(Json report, std::string text, const NotDecoherent &e) {
    report["decoherence"] = summary(e.report());
    report["error"] = "NotDecoherent";
    text += summary_text(report["decoherence"]);
    text += "error: the set does not decohere; no probabilities assigned\n";
    return Result{std::move(report), std::move(text), kExitNotDecoherent,
                  std::string("error: NotDecoherent: ") + e.what()};
}

Result cmd_check(const Globals &g, const std::string &file) {
    const auto sc = load_scenario(file);
    const auto rep = decoherence_functional(sc.grid, g.options());
    Json j = header("check", g);
    j["decoherence"] = summary(rep);
    std::string text = header_text(j) + summary_text(j["decoherence"]);
    return Result{std::move(j), std::move(text)};
}

Result cmd_prob(const Globals &g, const std::string &file) {
    const auto sc = load_scenario(file);
    Json j = header("prob", g);
    std::string text = header_text(j);
    const auto rep = decoherence_functional(sc.grid, g.options());
    if (!rep.decoherent) {
        return not_decoherent(std::move(j), std::move(text), NotDecoherent(rep));
    }
    j["decoherence"] = summary(rep);
    j["probabilities"] = probability_rows(rep.labels, rep.probabilities);
    text += summary_text(j["decoherence"]) + "probabilities:\n" + rows_text(j["probabilities"]);
    return Result{std::move(j), std::move(text)};
}

Result cmd_condition(const Globals &g, const std::string &file, const std::string &target,
                     const std::string &given) {
    const auto sc = load_scenario(file);
    const auto t = resolve_alternative(sc.grid, target);
    const auto d = resolve_alternative(sc.grid, given);
    Json j = header("condition", g);
    std::string text = header_text(j);
    try {
        const double p = conditional_probability(sc.grid, histories_with(sc.grid, t.set, t.alt),
                                                 histories_with(sc.grid, d.set, d.alt),
                                                 g.options());
        j["target"] = target;
        j["given"] = given;
        j["probability"] = report_probability(p);
        text += "  p(" + target + " | " + given + ") = " + fixed12(p) + "\n";
    } catch (const NotDecoherent &e) {
        return not_decoherent(std::move(j), std::move(text), e);
    }
    return Result{std::move(j), std::move(text)};
}

Result cmd_conditional(const Globals &g, const std::string &file, const std::string &data_flag,
                       bool retro) {
    const auto sc = load_scenario(file);
    const auto ref = resolve_alternative(sc.grid, data_reference(sc, data_flag));
    Json j = header(retro ? "retrodict" : "predict", g);
    std::string text = header_text(j);
    try {
        const auto table = retro ? retrodict(sc.grid, ref, g.options())
                                 : predict(sc.grid, ref, g.options());
        j["decoherence"] = summary(table.report);
        j["conditional"] = conditional_json(table);
        text += summary_text(j["decoherence"]) + conditional_text(j["conditional"]);
    } catch (const NotDecoherent &e) {
        return not_decoherent(std::move(j), std::move(text), e);
    }
    return Result{std::move(j), std::move(text)};
}

Result cmd_coarse(const Globals &g, const std::string &file, const std::string &name) {
    const auto sc = load_scenario(file);
    const Partition *p = sc.partition(name);
    if (p == nullptr) {
        std::string known;
        for (const auto &[n, part] : sc.partitions) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw ValidationError("partition.unknown", "no partition named '" + name + "'" +
                                                       (known.empty() ? "" : " (have " + known + ")"));
    }
    const auto cg = coarse_grain(sc.grid, *p, g.options());
    const double violation = check_sum_rules(sc.grid, *p);
    Json j = header("coarse", g);
    j["partition"] = name;
    j["decoherence"] = summary(cg.report);
    j["sum_rule_violation"] = violation;
    std::string text = header_text(j) + "partition: " + name + "\n" +
                       summary_text(j["decoherence"]) +
                       "max sum-rule violation: " + num(violation) + "\n";
    if (cg.report.decoherent) {
        j["probabilities"] = probability_rows(cg.report.labels, cg.report.probabilities);
        text += "probabilities:\n" + rows_text(j["probabilities"]);
    }
    return Result{std::move(j), std::move(text)};
}

Json grid_sets(const HistoryGrid &grid) {
    Json sets = Json::array();
    for (const auto &s : grid.sets()) {
        Json names = Json::array();
        for (const auto &p : s.projectors()) {
            names.push_back(p.name());
        }
        sets.push_back(Json{{"label", s.label()}, {"time", s.time()}, {"alternatives", names}});
    }
    return sets;
}

Result cmd_compat(const Globals &g, const std::string &file_a, const std::string &file_b) {
    const auto sa = load_scenario(file_a);
    const auto sb = load_scenario(file_b);
    Json j = header("compat", g);
    std::string text = header_text(j);
    std::optional<Realm> ra;
    std::optional<Realm> rb;
    try {
        ra.emplace(sa.grid, g.options());
    } catch (const NotDecoherent &e) {
        j["realm"] = "A";
        return not_decoherent(std::move(j), text + "realm A is not decoherent\n", e);
    }
    try {
        rb.emplace(sb.grid, g.options());
    } catch (const NotDecoherent &e) {
        j["realm"] = "B";
        return not_decoherent(std::move(j), text + "realm B is not decoherent\n", e);
    }
    const auto v = check_compatibility(*ra, *rb);
    j["status"] = to_string(v.status);
    j["reason"] = v.reason;
    text += "status: " + std::string(to_string(v.status)) + "\nreason: " + v.reason + "\n";
    if (v.status == Compatibility::undetermined) {
        j["commutator_norm"] = v.commutator_norm;
        text += "max commutator: " + num(v.commutator_norm) + "\n";
    }
    if (v.joint) {
        j["joint_sets"] = grid_sets(*v.joint);
        j["joint"] = summary(*v.joint_report);
        text += "joint sets:\n";
        for (const auto &s : j["joint_sets"]) {
            std::string names;
            for (const auto &n : s["alternatives"]) {
                names += (names.empty() ? "" : ", ") + n.get<std::string>();
            }
            text += "  t=" + time_text(s["time"].get<double>()) + ": {" + names + "}\n";
        }
        text += "joint decoherence:\n" + summary_text(j["joint"], "  ");
    }
    return Result{std::move(j), std::move(text)};
}

// ---------------------------------------------------------------------------
// Models

Result dump(const Scenario &sc) {
    return Result{Json(), dump_scenario(sc)};
}

Result cmd_three_box(const Globals &g, const std::string &realm_name, bool want_dump) {
    const auto realm = parse_three_box_realm(realm_name);
    const auto m = three_box(realm);
    if (want_dump) {
        return dump(m.scenario);
    }
    const auto &grid = m.scenario.grid;
    const auto rep = decoherence_functional(grid, g.options());
    Json j = header("model", g);
    j["model"] = "three-box";
    j["realm"] = to_string(realm);
    j["decoherence"] = summary(rep);
    std::string text = header_text(j) + "model: three-box (" + to_string(realm) + ")\n" +
                       summary_text(j["decoherence"]);
    if (rep.decoherent) {
        j["probabilities"] = probability_rows(rep.labels, rep.probabilities);
        text += "probabilities:\n" + rows_text(j["probabilities"]);
        const auto ref = resolve_alternative(grid, *m.scenario.data_projector);
        j["retrodiction"] = conditional_json(retrodict(grid, ref, g.options()));
        text += "retrodiction:\n" + conditional_text(j["retrodiction"]);
    }
    return Result{std::move(j), std::move(text)};
}

Result cmd_two_slit(const Globals &g, std::size_t bins, bool env, bool want_dump) {
    const auto m = two_slit(bins, env);
    if (want_dump) {
        return dump(m.scenario);
    }
    const auto &grid = m.scenario.grid;
    const auto &screen = *m.scenario.partition("screen");
    const auto &slit = *m.scenario.partition("slit");
    const auto fine = decoherence_functional(grid, g.options());
    const auto cg_screen = coarse_grain(grid, screen, g.options());
    const auto cg_slit = coarse_grain(grid, slit, g.options());
    const double violation = check_sum_rules(grid, screen);

    Json j = header("model", g);
    j["model"] = "two-slit";
    j["bins"] = bins;
    j["environment"] = env;
    j["fine"] = summary(fine);
    j["screen"] = summary(cg_screen.report);
    j["slit_merging_sum_rule_violation"] = violation;
    j["screen_probabilities"] =
        probability_rows(cg_screen.report.labels, cg_screen.report.probabilities);
    j["slit_marginal"] = probability_rows(cg_slit.report.labels, cg_slit.report.probabilities);
    std::string text = header_text(j) + "model: two-slit (" + std::to_string(bins) + " bins, " +
                       (env ? "with" : "without") + " which-slit record)\n";
    text += "fine set (slit, bin):\n" + summary_text(j["fine"], "  ");
    text += "screen coarse-graining:\n" + summary_text(j["screen"], "  ");
    text += "slit-merging sum-rule violation: " + num(violation) + "\n";
    text += "screen probabilities:\n" + rows_text(j["screen_probabilities"]);
    text += "slit marginal:\n" + rows_text(j["slit_marginal"]);
    return Result{std::move(j), std::move(text)};
}

Result cmd_spin_env(const Globals &g, std::size_t n, double theta, bool want_dump) {
    const auto m = spin_environment(n, theta);
    if (want_dump) {
        return dump(m.scenario);
    }
    const auto rep = decoherence_functional(m.scenario.grid, g.options());
    Json j = header("model", g);
    j["model"] = "spin-env";
    j["n_env"] = n;
    j["theta"] = theta;
    j["decoherence"] = summary(rep);
    j["normalized_offdiag"] = rep.max_offdiag_normalized;
    j["record_overlap"] = m.record_overlap;
    std::string text = header_text(j) + "model: spin-env (n = " + std::to_string(n) +
                       ", theta = " + num(theta) + ")\n" + summary_text(j["decoherence"]) +
                       "record overlap |cos(theta/2)|^n: " + num(m.record_overlap) + "\n";
    if (rep.decoherent) {
        j["probabilities"] = probability_rows(rep.labels, rep.probabilities);
        text += "probabilities:\n" + rows_text(j["probabilities"]);
    }
    return Result{std::move(j), std::move(text)};
}

// ---------------------------------------------------------------------------
// Spacetime

using NamedEvents = std::map<std::string, Event>;

NamedEvents load_events(const std::string &path) {
    NamedEvents out;
    if (path.empty()) {
        return out;
    }
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read events file '" + path + "'", "");
    }
    Json root;
    try {
        root = Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), "");
    }
    if (!root.is_object()) {
        throw ParseError("events file must map names to [t, x, y, z]", "");
    }
    for (const auto &[name, v] : root.items()) {
        if (!v.is_array() || v.empty() || v.size() > 4) {
            throw ParseError("event '" + name + "' must be [t, x, y, z]", "/" + name);
        }
        std::array<double, 4> c{};
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                throw ParseError("event coordinate is not a number", "/" + name + "/" +
                                                                       std::to_string(i));
            }
            c[i] = v[i].get<double>();
        }
        out[name] = Event{c[0], c[1], c[2], c[3]};
    }
    return out;
}

Event event_arg(const std::string &s, const NamedEvents &named) {
    if (auto it = named.find(s); it != named.end()) {
        return it->second;
    }
    return parse_event(s);
}

Vec3 vec3_arg(const std::string &s) {
    const Event e = parse_event(s);
    // A single number is a speed along x.
    return {e.t, e.x, e.y};
}

Json event_json(const Event &e) { return Json::array({e.t, e.x, e.y, e.z}); }

std::string event_text(const Event &e) {
    return "(" + num(e.t) + ", " + num(e.x) + ", " + num(e.y) + ", " + num(e.z) + ")";
}

Result cmd_classify(const Globals &g, const Event &a, const Event &b) {
    Json j = header("spacetime classify", g);
    j["a"] = event_json(a);
    j["b"] = event_json(b);
    j["interval"] = interval(a, b);
    j["separation"] = to_string(classify(a, b));
    std::string text = header_text(j) + "a: " + event_text(a) + "\nb: " + event_text(b) +
                       "\ninterval s^2: " + num(interval(a, b)) +
                       "\nseparation: " + to_string(classify(a, b)) + "\n";
    return Result{std::move(j), std::move(text)};
}

Result cmd_order(const Globals &g, const Event &a, const Event &b, const Vec3 &v) {
    const Boost boost(v);
    const Event ap = boost_event(a, boost);
    const Event bp = boost_event(b, boost);
    const auto side = happened_relative_to_surface(a, b, boost);
    const char *order = side == SurfaceSide::on_S      ? "simultaneous"
                        : side == SurfaceSide::past_of_S ? "b_before_a"
                                                         : "a_before_b";
    Json j = header("spacetime order", g);
    j["velocity"] = Json::array({v[0], v[1], v[2]});
    j["a_boosted"] = event_json(ap);
    j["b_boosted"] = event_json(bp);
    j["dt_boosted"] = bp.t - ap.t;
    j["order"] = order;
    j["b_relative_to_surface"] = to_string(side);
    j["separation"] = to_string(classify(a, b));
    std::string text = header_text(j) + "velocity: (" + num(v[0]) + ", " + num(v[1]) + ", " +
                       num(v[2]) + ")\na': " + event_text(ap) + "\nb': " + event_text(bp) +
                       "\ndt': " + num(bp.t - ap.t) + "\norder: " + order +
                       "\nb relative to surface through a: " + to_string(side) +
                       "\nseparation: " + to_string(classify(a, b)) + "\n";
    return Result{std::move(j), std::move(text)};
}

Igus igus_arg(const std::string &s) {
    // "x,y,z" or "x,y,z;vx,vy,vz"
    Igus out;
    const auto semi = s.find(';');
    out.position = vec3_arg(s.substr(0, semi));
    if (semi != std::string::npos) {
        out.velocity = vec3_arg(s.substr(semi + 1));
    }
    return out;
}

Result cmd_present(const Globals &g, const std::vector<std::string> &igus, double tau_star,
                   double env, PresentThresholds th) {
    IgusGroup group;
    for (const auto &s : igus) {
        group.igus.push_back(igus_arg(s));
    }
    group.tau_star = tau_star;
    group.env_timescale = env;
    const auto r = common_present_check(group, th);
    Json j = header("spacetime present", g);
    j["igus"] = group.igus.size();
    j["tau_star"] = tau_star;
    j["env_timescale"] = env;
    j["v_max"] = th.v_max;
    j["ratio"] = th.ratio;
    j["max_relative_speed"] = r.max_relative_speed;
    j["max_light_time"] = r.max_light_time;
    j["slow_relative_motion"] = r.slow_relative_motion;
    j["short_light_time"] = r.short_light_time;
    j["fast_perception"] = r.fast_perception;
    j["common_present"] = r.common_present;
    std::string text = header_text(j);
    text += "thresholds: v_max = " + num(th.v_max) + ", ratio = " + num(th.ratio) + "\n";
    text += "1. relative speeds small: " + yes_no(r.slow_relative_motion) +
            " (max " + num(r.max_relative_speed) + " <= " + num(th.v_max) + ")\n";
    text += "2. light travel time short: " + yes_no(r.short_light_time) + " (max " +
            num(r.max_light_time) + " s <= " + num(th.ratio * tau_star) + " s)\n";
    text += "3. perception faster than environment: " + yes_no(r.fast_perception) + " (" +
            num(tau_star) + " s <= " + num(th.ratio * env) + " s)\n";
    text += "common present: " + yes_no(r.common_present) + "\n";
    return Result{std::move(j), std::move(text)};
}

Result cmd_sweep(const Globals &g, std::size_t count) {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> speed(0.0, 0.99);
    double worst = 0.0;
    std::size_t spacelike = 0;
    std::size_t both_orders = 0;
    std::size_t timelike = 0;
    std::size_t timelike_flips = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const Event a{coord(rng), coord(rng), coord(rng), coord(rng)};
        const Event b{coord(rng), coord(rng), coord(rng), coord(rng)};
        Vec3 dir{unit(rng), unit(rng), unit(rng)};
        const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
        const double s = speed(rng);
        const Boost boost({s * dir[0] / len, s * dir[1] / len, s * dir[2] / len});
        const double before = interval(a, b);
        const double after = interval(boost_event(a, boost), boost_event(b, boost));
        worst = std::max(worst, std::abs(after - before));
        const auto sep = classify(a, b);
        if (sep == Separation::spacelike) {
            ++spacelike;
            const auto ob = ordering_boosts(a, b);
            const double d1 = boost_event(b, ob->b_first).t - boost_event(a, ob->b_first).t;
            const double d2 = boost_event(b, ob->a_first).t - boost_event(a, ob->a_first).t;
            if (d1 < 0.0 && d2 > 0.0) {
                ++both_orders;
            }
        } else if (sep == Separation::timelike_future || sep == Separation::timelike_past) {
            ++timelike;
            const double d = boost_event(b, boost).t - boost_event(a, boost).t;
            if ((d > 0.0) != (b.t > a.t)) {
                ++timelike_flips;
            }
        }
    }
    Json j = header("spacetime sweep", g);
    j["seed"] = g.seed;
    j["samples"] = count;
    j["max_interval_deviation"] = worst;
    j["spacelike_pairs"] = spacelike;
    j["spacelike_with_both_orders"] = both_orders;
    j["timelike_pairs"] = timelike;
    j["timelike_order_flips"] = timelike_flips;
    std::string text = header_text(j) + "seed: " + std::to_string(g.seed) +
                       "\nsamples: " + std::to_string(count) +
                       "\nmax interval deviation: " + num(worst) +
                       "\nspacelike pairs with both orders: " + std::to_string(both_orders) +
                       " / " + std::to_string(spacelike) +
                       "\ntimelike order flips: " + std::to_string(timelike_flips) + " / " +
                       std::to_string(timelike) + "\n";
    return Result{std::move(j), std::move(text)};
}

std::string error_text(const Error &e) {
    std::string s = "error: " + e.kind();
    if (const auto *v = dynamic_cast<const ValidationError *>(&e)) {
        s += " [" + v->invariant() + "]";
    }
    s += ": " + std::string(e.what());
    return s + "\n";
}

} // namespace

Outcome run(const std::vector<std::string> &args) {
    Globals g;
    CLI::App app{"dhq: decoherent histories toolkit"};
    app.name("dhq");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol-dec", g.tol_dec, "Decoherence tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", g.seed, "Seed for property sweeps");
    app.add_option("--threads", g.threads, "Worker threads for the decoherence functional")
        ->check(CLI::Range(1u, 256u));

    std::function<Result()> action;
    std::string file;
    std::string file_b;
    std::string target;
    std::string given;
    std::string data;
    std::string partition;

    auto *check = app.add_subcommand("check", "Decoherence verdict for a scenario");
    check->add_option("scenario", file)->required();
    check->callback([&] { action = [&] { return cmd_check(g, file); }; });

    auto *prob = app.add_subcommand("prob", "History probabilities (exit 2 if not decoherent)");
    prob->add_option("scenario", file)->required();
    prob->callback([&] { action = [&] { return cmd_prob(g, file); }; });

    auto *cond = app.add_subcommand("condition", "p(target | given)");
    cond->add_option("scenario", file)->required();
    cond->add_option("--given", given, "NAME@T")->required();
    cond->add_option("--target", target, "NAME@T")->required();
    cond->callback([&] { action = [&] { return cmd_condition(g, file, target, given); }; });

    auto *retro = app.add_subcommand("retrodict", "p(past | data), data at the latest time");
    retro->add_option("scenario", file)->required();
    retro->add_option("--data", data, "NAME@T (default: the scenario's data_projector)");
    retro->callback([&] { action = [&] { return cmd_conditional(g, file, data, true); }; });

    auto *pred = app.add_subcommand("predict", "p(future | data), data at the earliest time");
    pred->add_option("scenario", file)->required();
    pred->add_option("--data", data, "NAME@T (default: the scenario's data_projector)");
    pred->callback([&] { action = [&] { return cmd_conditional(g, file, data, false); }; });

    auto *coarse = app.add_subcommand("coarse", "Coarse-grain by a named partition");
    coarse->add_option("scenario", file)->required();
    coarse->add_option("--partition", partition, "Partition name")->required();
    coarse->callback([&] { action = [&] { return cmd_coarse(g, file, partition); }; });

    auto *compat = app.add_subcommand("compat", "Compatibility of two realms");
    compat->add_option("scenario_a", file)->required();
    compat->add_option("scenario_b", file_b)->required();
    compat->callback([&] { action = [&] { return cmd_compat(g, file, file_b); }; });

    auto *model = app.add_subcommand("model", "Built-in scenarios");
    model->require_subcommand(1);
    bool want_dump = false;
    std::string realm = "past_A";
    std::size_t bins = 8;
    bool env = false;
    std::size_t n_env = 4;
    double theta = std::numbers::pi / 2.0;
    auto *tb = model->add_subcommand("three-box", "Three-box model");
    tb->add_option("--realm", realm, "past_A, past_B, past_Psi or joint_AB");
    tb->add_flag("--dump", want_dump, "Print the scenario file instead of a report");
    tb->callback([&] { action = [&] { return cmd_three_box(g, realm, want_dump); }; });
    auto *ts = model->add_subcommand("two-slit", "Two-slit experiment");
    ts->add_option("--bins", bins, "Screen bins (>= 2)");
    ts->add_flag("--env", env, "Record the slit in an ancilla");
    ts->add_flag("--dump", want_dump, "Print the scenario file instead of a report");
    ts->callback([&] { action = [&] { return cmd_two_slit(g, bins, env, want_dump); }; });
    auto *se = model->add_subcommand("spin-env", "System qubit dephased by environment qubits");
    se->add_option("--n", n_env, "Environment qubits (1..20)");
    se->add_option("--theta", theta, "Rotation angle per environment qubit (radians)");
    se->add_flag("--dump", want_dump, "Print the scenario file instead of a report");
    se->callback([&] { action = [&] { return cmd_spin_env(g, n_env, theta, want_dump); }; });

    auto *st = app.add_subcommand("spacetime", "Causal structure in flat spacetime (c = 1)");
    st->require_subcommand(1);
    std::string ev_a;
    std::string ev_b;
    std::string events_file;
    std::string velocity = "0";
    std::vector<std::string> igus;
    double tau_star = 0.1;
    double env_time = 10.0;
    PresentThresholds th;
    std::size_t samples = 1000;
    auto *cl = st->add_subcommand("classify", "Classify the separation of b from a");
    cl->add_option("--a", ev_a, "t,x,y,z or a name from --events")->required();
    cl->add_option("--b", ev_b, "t,x,y,z or a name from --events")->required();
    cl->add_option("--events", events_file, "JSON file of named events");
    cl->callback([&] {
        action = [&] {
            const auto named = load_events(events_file);
            return cmd_classify(g, event_arg(ev_a, named), event_arg(ev_b, named));
        };
    });
    auto *ord = st->add_subcommand("order", "Temporal order of a and b in a boosted frame");
    ord->add_option("--a", ev_a, "t,x,y,z or a name from --events")->required();
    ord->add_option("--b", ev_b, "t,x,y,z or a name from --events")->required();
    ord->add_option("--v", velocity, "Boost velocity: vx or vx,vy,vz");
    ord->add_option("--events", events_file, "JSON file of named events");
    ord->callback([&] {
        action = [&] {
            const auto named = load_events(events_file);
            return cmd_order(g, event_arg(ev_a, named), event_arg(ev_b, named),
                             vec3_arg(velocity));
        };
    });
    auto *pr = st->add_subcommand("present", "Contingencies for a common present");
    pr->add_option("--igus", igus, "x,y,z[;vx,vy,vz] per IGUS")->required();
    pr->add_option("--tau-star", tau_star, "Perception timescale (s)");
    pr->add_option("--env", env_time, "Environment variation timescale (s)");
    pr->add_option("--v-max", th.v_max, "Relative speed threshold (fraction of c)");
    pr->add_option("--ratio", th.ratio, "'Small compared to' ratio");
    pr->callback([&] {
        action = [&] { return cmd_present(g, igus, tau_star, env_time, th); };
    });
    auto *sw = st->add_subcommand("sweep", "Randomized boost property sweep (uses --seed)");
    sw->add_option("--samples", samples, "Number of random event pairs");
    sw->callback([&] { action = [&] { return cmd_sweep(g, samples); }; });

    Outcome out;
    std::ostringstream os;
    std::ostringstream es;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, os, es);
        out.out = os.str();
        out.err = es.str();
        out.exit_code = code == 0 ? kExitOk : kExitInputError;
        return out;
    }
    try {
        Result r = action();
        out.exit_code = r.exit_code;
        out.err = r.err.empty() ? "" : r.err + "\n";
        if (r.report.is_null()) {
            out.out = r.text;
        } else if (g.format == "json") {
            r.report["exit_code"] = r.exit_code;
            out.out = r.report.dump(2) + "\n";
        } else {
            out.out = r.text;
        }
    } catch (const Error &e) {
        out.exit_code = kExitInputError;
        out.err = error_text(e);
        if (g.format == "json") {
            Json j = Json::object();
            j["error"] = e.kind();
            j["message"] = e.what();
            if (const auto *v = dynamic_cast<const ValidationError *>(&e)) {
                j["invariant"] = v->invariant();
                j["location"] = v->location();
            } else if (const auto *p = dynamic_cast<const ParseError *>(&e)) {
                j["location"] = p->location();
            }
            j["exit_code"] = kExitInputError;
            out.out = j.dump(2) + "\n";
        }
    } catch (const std::exception &e) {
        out.exit_code = kExitInputError;
        out.err = std::string("internal error: ") + e.what() + "\n";
    }
    return out;
}

} // namespace dhq::cli
