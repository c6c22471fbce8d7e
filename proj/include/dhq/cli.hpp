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
 * The `dhq` command line, runnable in-process so tests can inspect its
 * output and exit status.
 */
#pragma once

#include <string>
#include <vector>

namespace dhq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotDecoherent = 2;

struct Outcome {
    int exit_code = kExitOk;
    std::string out;  ///< report (standard output)
    std::string err;  ///< diagnostics (standard error)
};

/// Runs one command. `args` excludes the program name.
[[nodiscard]] Outcome run(const std::vector<std::string> &args);

/// Probabilities as reported: values below 1e-14 in magnitude become 0 and
/// the rest are rounded to 12 decimals.
[[nodiscard]] double report_probability(double p);

} // namespace dhq::cli
