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

// scenario.hpp
//
// YAML scenario files. Durations are decimal seconds, identifiers are
// 12 hex digits (colons optional). Every failure is reported as a
// ConfigError carrying the offending key and its source line.
//
//   duration: 300
//   seed: 7
//   sim:      {tick: 0.01, snapshot: 0.1, backbone_delay: 0.001, timestamp_jitter: 50e-9}
//   engine:   {t_fup: 2, fup_records_max: 8, ...}      # defaults for every station
//   aps:
//     - {id: "0a0000000001", beacon_period: 0.1024, tsf_start: 0, phase: 0}
//   stas:
//     - id: "020000000001"
//       kind: ffts                 # or rfts
//       gc_capable: true
//       quality: {priority1: 0, clock_class: 6, accuracy: 32, variance: 100, priority2: 0}
//       gc_error_ns: 100
//       freq_error_ppm: 12.5
//       initial_offset: 0.002
//       active: true
//       hears: ["0a0000000001"]    # shorthand for hearability entries
//       ap: "0a0000000001"         # shorthand for the association entry
//       engine: {t_fup: 1}         # per-station overrides
//   hearability:
//     - {ap: "0a0000000001", sta: "020000000001", delay: 0}
//   association: {"020000000001": "0a0000000001"}
//   loss: {wireless_loss_prob: 0.1, beacon_loss_prob: 0.5, fup_loss_prob: 0,
//          burst: {mean_length: 4, enter_prob: 0.01}}
//   mobility:
//     - {time: 100, op: remove, sta: "...", ap: "...", reassociate: "..."}
//     - {time: 120, op: node_down, sta: "..."}

#ifndef DOMINO_SCENARIO_HPP
#define DOMINO_SCENARIO_HPP

#include <domino/simnet.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace domino {

Scenario parse_scenario(const std::string& text);

/// Reads and parses `path`. I/O failures are reported as ConfigError too.
Scenario load_scenario(const std::filesystem::path& path);

/// Parameters a sweep may vary.
inline constexpr std::string_view kSweepParameters[] = {"wireless_loss_prob", "fup_records_max", "t_fup",
                                                        "freq_error_ppm"};

/// Overrides one sweep parameter across the whole scenario. freq_error_ppm
/// and t_fup / fup_records_max apply to every station. Throws ConfigError
/// for unknown names or unparsable values.
void apply_parameter(Scenario& scenario, std::string_view name, std::string_view value);

}  // namespace domino

#endif  // DOMINO_SCENARIO_HPP
