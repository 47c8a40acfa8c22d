// Copyright 2026 The domino-sim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cli.hpp
//
// The `domino` command line: single runs and parameter sweeps.
//
// Exit status: 0 success, 1 protocol violation detected (parent cycle or
// broken engine invariant), 2 input error (bad flags, scenario, or output
// location).

#ifndef DOMINO_CLI_HPP
#define DOMINO_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace domino {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;

/// Default output directory when neither --out nor this variable is set is
/// "domino-out".
inline constexpr const char* kOutDirEnv = "DOMINO_OUT_DIR";

struct SweepSpec {
    std::string param;
    std::vector<std::string> values;
};

struct RunManifest {
    std::filesystem::path scenario;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<std::filesystem::path> out_dir;
    bool force = false;
    bool debug_disable_sq_gate = false;  // test-only
    std::optional<SweepSpec> sweep;
    unsigned jobs = 1;
};

int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to cmd_run / cmd_sweep.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace domino

#endif  // DOMINO_CLI_HPP
