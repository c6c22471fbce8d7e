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
#include "dhq/spacetime.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dhq/errors.hpp"

namespace dhq {

namespace {

double dot(const Vec3 &a, const Vec3 &b) noexcept {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 sub(const Vec3 &a, const Vec3 &b) noexcept {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 cross(const Vec3 &a, const Vec3 &b) noexcept {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3 &a) noexcept { return std::sqrt(dot(a, a)); }

} // namespace

Event parse_event(const std::string &text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char *begin = item.c_str();
        char *end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        while (end != nullptr && *end == ' ') {
            ++end;
        }
        if (end == begin || *end != '\0' || errno != 0 || !std::isfinite(v)) {
            throw ParseError("bad event coordinate '" + item + "' in '" + text + "'", text);
        }
        parts.push_back(v);
    }
    if (parts.empty() || parts.size() > 4) {
        throw ParseError("event must be t[,x[,y[,z]]], got '" + text + "'", text);
    }
    parts.resize(4, 0.0);
    return Event{parts[0], parts[1], parts[2], parts[3]};
}

Boost::Boost(Vec3 velocity) : v_(velocity) {
    const double s = norm(v_);
    if (!std::isfinite(s) || s >= 1.0) {
        std::ostringstream os;
        os << "boost speed " << s << " is not below c";
        throw SuperluminalBoost(os.str(), s);
    }
}

double Boost::speed() const noexcept { return norm(v_); }

double Boost::gamma() const noexcept { return 1.0 / std::sqrt(1.0 - dot(v_, v_)); }

double interval(const Event &a, const Event &b) noexcept {
    const double dt = b.t - a.t;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    return -dt * dt + dx * dx + dy * dy + dz * dz;
}

const char *to_string(Separation s) noexcept {
    switch (s) {
    case Separation::timelike_future:
        return "timelike_future";
    case Separation::timelike_past:
        return "timelike_past";
    case Separation::null_future:
        return "null_future";
    case Separation::null_past:
        return "null_past";
    case Separation::spacelike:
        return "spacelike";
    }
    return "spacelike";
}

Separation classify(const Event &a, const Event &b) noexcept {
    const double s2 = interval(a, b);
    const bool future = b.t >= a.t;
    if (s2 > kTolGeo) {
        return Separation::spacelike;
    }
    if (s2 < -kTolGeo) {
        return future ? Separation::timelike_future : Separation::timelike_past;
    }
    return future ? Separation::null_future : Separation::null_past;
}

Event boost_event(const Event &e, const Boost &b) noexcept {
    const Vec3 &v = b.velocity();
    const double v2 = dot(v, v);
    if (v2 == 0.0) {
        return e;
    }
    const double g = b.gamma();
    const Vec3 x{e.x, e.y, e.z};
    const double vx = dot(v, x);
    const double k = (g - 1.0) * vx / v2 - g * e.t;
    return Event{g * (e.t - vx), x[0] + k * v[0], x[1] + k * v[1], x[2] + k * v[2]};
}

std::optional<Boost> simultaneity_boost(const Event &a, const Event &b) {
    if (classify(a, b) != Separation::spacelike) {
        return std::nullopt;
    }
    const double dt = b.t - a.t;
    const Vec3 dx{b.x - a.x, b.y - a.y, b.z - a.z};
    const double d2 = dot(dx, dx);
    return Boost({dt * dx[0] / d2, dt * dx[1] / d2, dt * dx[2] / d2});
}

std::optional<OrderingBoosts> ordering_boosts(const Event &a, const Event &b) {
    if (classify(a, b) != Separation::spacelike) {
        return std::nullopt;
    }
    const Vec3 dx{b.x - a.x, b.y - a.y, b.z - a.z};
    const double len = norm(dx);
    const Vec3 n{dx[0] / len, dx[1] / len, dx[2] / len};
    const double u = (b.t - a.t) / len;
    auto along = [&](double w) { return Boost({w * n[0], w * n[1], w * n[2]}); };
    // dt' = gamma (dt - w |dx|) is negative above u and positive below.
    return OrderingBoosts{along(0.5 * (u + 1.0)), along(0.5 * (u - 1.0))};
}

const char *to_string(SurfaceSide s) noexcept {
    switch (s) {
    case SurfaceSide::past_of_S:
        return "past_of_S";
    case SurfaceSide::on_S:
        return "on_S";
    case SurfaceSide::future_of_S:
        return "future_of_S";
    }
    return "on_S";
}

SurfaceSide happened_relative_to_surface(const Event &a, const Event &b,
                                         const Boost &surface) noexcept {
    const double dt = boost_event(b, surface).t - boost_event(a, surface).t;
    if (std::abs(dt) <= kTolGeo) {
        return SurfaceSide::on_S;
    }
    return dt > 0.0 ? SurfaceSide::future_of_S : SurfaceSide::past_of_S;
}

double relative_speed(const Vec3 &va, const Vec3 &vb) {
    const double denom = 1.0 - dot(va, vb);
    const Vec3 d = sub(va, vb);
    const Vec3 c = cross(va, vb);
    const double num = std::max(0.0, dot(d, d) - dot(c, c));
    return std::sqrt(num) / denom;
}

CommonPresentReport common_present_check(const IgusGroup &group,
                                         PresentThresholds thresholds) {
    if (group.igus.empty()) {
        throw ValidationError("igus.nonempty", "IGUS group is empty");
    }
    if (!(group.tau_star > 0.0) || !(group.env_timescale > 0.0)) {
        throw ValidationError("igus.timescales", "timescales must be positive");
    }
    for (const auto &g : group.igus) {
        if (!(norm(g.velocity) < 1.0)) {
            throw ValidationError("igus.subluminal", "IGUS velocity must be below c");
        }
    }
    CommonPresentReport r;
    r.thresholds = thresholds;
    for (std::size_t i = 0; i < group.igus.size(); ++i) {
        for (std::size_t j = i + 1; j < group.igus.size(); ++j) {
            const auto &a = group.igus[i];
            const auto &b = group.igus[j];
            r.max_relative_speed =
                std::max(r.max_relative_speed, relative_speed(a.velocity, b.velocity));
            r.max_light_time = std::max(r.max_light_time, norm(sub(a.position, b.position)));
        }
    }
    r.slow_relative_motion = r.max_relative_speed <= thresholds.v_max;
    r.short_light_time = r.max_light_time <= thresholds.ratio * group.tau_star;
    r.fast_perception = group.tau_star <= thresholds.ratio * group.env_timescale;
    r.common_present = r.slow_relative_motion && r.short_light_time && r.fast_perception;
    return r;
}

} // namespace dhq
