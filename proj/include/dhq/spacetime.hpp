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
 * Causal structure of flat spacetime in units with c = 1 (seconds and
 * light-seconds): interval classification, Lorentz boosts, frame-dependent
 * simultaneity and the conditions for a group of observers to share a
 * common present.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dhq {

inline constexpr double kTolGeo = 1e-9;

struct Event {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Parses "t,x,y,z" (missing spatial components are 0). Throws ParseError.
[[nodiscard]] Event parse_event(const std::string &text);

using Vec3 = std::array<double, 3>;

/// Frame moving with velocity v (|v| < 1) relative to the input frame.
class Boost {
  public:
    /// Throws SuperluminalBoost unless |v| < 1 and finite.
    explicit Boost(Vec3 velocity);

    [[nodiscard]] const Vec3 &velocity() const noexcept { return v_; }
    [[nodiscard]] double speed() const noexcept;
    [[nodiscard]] double gamma() const noexcept;

  private:
    Vec3 v_;
};

/// s^2 = -dt^2 + |dx|^2.
[[nodiscard]] double interval(const Event &a, const Event &b) noexcept;

enum class Separation { timelike_future, timelike_past, null_future, null_past, spacelike };

[[nodiscard]] const char *to_string(Separation s) noexcept;

/// Separation of b relative to a; null when |s^2| <= kTolGeo. A null pair
/// with dt = 0 (coincident events) is reported as null_future.
[[nodiscard]] Separation classify(const Event &a, const Event &b) noexcept;

/// Coordinates of e in the boosted frame.
[[nodiscard]] Event boost_event(const Event &e, const Boost &b) noexcept;

/// Boost in which a and b are simultaneous: v = dt dx / |dx|^2. Empty
/// unless the pair is spacelike.
[[nodiscard]] std::optional<Boost> simultaneity_boost(const Event &a, const Event &b);

struct OrderingBoosts {
    Boost b_first;  ///< frame where b precedes a
    Boost a_first;  ///< frame where a precedes b
};

/// For a spacelike pair, boosts along dx with speeds (u + 1)/2 and
/// (u - 1)/2 around the simultaneity speed u = dt/|dx|, one on each side.
/// Empty unless the pair is spacelike.
[[nodiscard]] std::optional<OrderingBoosts> ordering_boosts(const Event &a, const Event &b);

enum class SurfaceSide { past_of_S, on_S, future_of_S };

[[nodiscard]] const char *to_string(SurfaceSide s) noexcept;

/// Side of b relative to the constant-t' surface through a in the frame
/// given by `surface`; on_S when |dt'| <= kTolGeo.
[[nodiscard]] SurfaceSide happened_relative_to_surface(const Event &a, const Event &b,
                                                       const Boost &surface) noexcept;

struct Igus {
    Vec3 position{};  ///< light-seconds
    Vec3 velocity{};  ///< fraction of c
};

struct IgusGroup {
    std::vector<Igus> igus;
    double tau_star = 0.1;       ///< perception timescale (s)
    double env_timescale = 10.0; ///< environment variation timescale (s)
};

inline constexpr double kDefaultVMax = 0.01;
inline constexpr double kDefaultRatio = 0.1;

struct PresentThresholds {
    double v_max = kDefaultVMax;
    double ratio = kDefaultRatio;
};

struct CommonPresentReport {
    PresentThresholds thresholds;
    double max_relative_speed = 0.0;
    double max_light_time = 0.0;  ///< seconds
    bool slow_relative_motion = true;   ///< max relative speed <= v_max
    bool short_light_time = true;       ///< max light time <= ratio * tau_star
    bool fast_perception = true;        ///< tau_star <= ratio * env_timescale
    bool common_present = true;
};

/// Throws ValidationError for an empty group, non-positive timescales or
/// |v| >= 1.
[[nodiscard]] CommonPresentReport common_present_check(const IgusGroup &group,
                                                       PresentThresholds thresholds = {});

/// Relativistic speed of b in the rest frame of a.
[[nodiscard]] double relative_speed(const Vec3 &va, const Vec3 &vb);

} // namespace dhq
