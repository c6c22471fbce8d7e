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

#include <stdexcept>
#include <string>
#include <utility>

namespace dhq {

/// Base of every error the engine raises. `kind()` is a stable identifier
/// used by the CLI in structured error messages.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    [[nodiscard]] const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string &what)
        : Error("DimensionMismatch", what) {}
};

class DegenerateSpan : public Error {
  public:
    explicit DegenerateSpan(const std::string &what)
        : Error("DegenerateSpan", what) {}
};

class NotHermitian : public Error {
  public:
    NotHermitian(const std::string &what, double deviation)
        : Error("NotHermitian", what), deviation_(deviation) {}
    [[nodiscard]] double deviation() const noexcept { return deviation_; }

  private:
    double deviation_;
};

/// An invariant of an input object does not hold. `invariant()` names the
/// violated rule (e.g. "alternative_set.completeness"); `location()` is a
/// JSON pointer when the object came from a scenario file.
class ValidationError : public Error {
  public:
    ValidationError(std::string invariant, const std::string &what,
                    std::string location = {})
        : Error("ValidationError", what), invariant_(std::move(invariant)),
          location_(std::move(location)) {}
    [[nodiscard]] const std::string &invariant() const noexcept {
        return invariant_;
    }
    [[nodiscard]] const std::string &location() const noexcept {
        return location_;
    }

  private:
    std::string invariant_;
    std::string location_;
};

class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::string location)
        : Error("ParseError", what), location_(std::move(location)) {}
    [[nodiscard]] const std::string &location() const noexcept {
        return location_;
    }

  private:
    std::string location_;
};

class GridTooLarge : public Error {
  public:
    explicit GridTooLarge(const std::string &what)
        : Error("GridTooLarge", what) {}
};

class InvalidPartition : public Error {
  public:
    explicit InvalidPartition(const std::string &what)
        : Error("InvalidPartition", what) {}
};

class NonCommutingSets : public Error {
  public:
    NonCommutingSets(const std::string &what, double commutator_norm)
        : Error("NonCommutingSets", what), commutator_norm_(commutator_norm) {}
    [[nodiscard]] double commutator_norm() const noexcept {
        return commutator_norm_;
    }

  private:
    double commutator_norm_;
};

class ConditionOnNull : public Error {
  public:
    ConditionOnNull(const std::string &what, double probability)
        : Error("ConditionOnNull", what), probability_(probability) {}
    [[nodiscard]] double probability() const noexcept { return probability_; }

  private:
    double probability_;
};

class EnvironmentTooLarge : public Error {
  public:
    explicit EnvironmentTooLarge(const std::string &what)
        : Error("EnvironmentTooLarge", what) {}
};

class SuperluminalBoost : public Error {
  public:
    SuperluminalBoost(const std::string &what, double speed)
        : Error("SuperluminalBoost", what), speed_(speed) {}
    [[nodiscard]] double speed() const noexcept { return speed_; }

  private:
    double speed_;
};

} // namespace dhq
