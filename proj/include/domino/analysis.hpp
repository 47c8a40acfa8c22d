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

// analysis.hpp
//
// Read-only analytics over a simulation trace: synchronization error
// against the acting grandmaster, tree reconstruction and validation,
// convergence and settling times, pairing statistics, CSV export.

#ifndef DOMINO_ANALYSIS_HPP
#define DOMINO_ANALYSIS_HPP

#include <domino/simnet.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace domino {

// Synchronization error -------------------------------------------------------------

/// Index of the acting grandmaster `node` follows in `snap`, reached through
/// parent pointers. nullopt when the node is off, unsynchronized, on a
/// cycle, or hangs below a station that is not an acting grandmaster.
std::optional<std::size_t> reference_of(const Snapshot& snap, const Trace& trace, std::size_t node);

/// Local time of `node` minus local time of its reference, at snapshot
/// `snap_index`; nullopt when there is no reference.
std::optional<std::int64_t> snapshot_error(const Trace& trace, std::size_t snap_index, std::size_t node);

/// Error at true time `t`, interpolated linearly between the surrounding
/// snapshots. nullopt when either neighbour is undefined. Throws
/// ContractViolation for an unknown node or `t` outside the snapshot span.
std::optional<double> sync_error(const Trace& trace, const NodeId& node, Nanos t);

struct ErrorSample {
    Nanos time{0};
    NodeId node;
    std::int64_t error_ns = 0;

    bool operator==(const ErrorSample&) const = default;
};

/// Every defined snapshot error, snapshot-major, nodes in trace order.
std::vector<ErrorSample> error_series(const Trace& trace);
std::vector<ErrorSample> error_series(const Trace& trace, const NodeId& node);

// Trees -------------------------------------------------------------------------------

struct TreeSnapshot {
    Nanos time{0};
    std::vector<std::pair<NodeId, NodeId>> edges;  // (child, parent), child order
    std::vector<NodeId> roots;                     // acting grandmasters
    std::vector<NodeId> orphans;                   // powered, parentless, not grandmaster
    std::vector<std::vector<NodeId>> cycles;
    std::vector<NodeId> active;

    std::optional<NodeId> root() const
    {
        return roots.size() == 1 ? std::optional<NodeId>(roots.front()) : std::nullopt;
    }
    std::optional<NodeId> parent_of(const NodeId& id) const;
    /// Ancestors from the parent upwards; empty for roots. Stops on cycles.
    std::vector<NodeId> ancestors(const NodeId& id) const;
    /// True when one root exists, no cycles or orphans, and every powered
    /// station reaches that root.
    bool single_tree() const;
};

/// Parent pointers as of `t`, rebuilt from the parent, node_down, and
/// node_up records.
TreeSnapshot extract_tree(const Trace& trace, Nanos t);

/// Parent pointers recorded in one snapshot.
TreeSnapshot snapshot_tree(const Trace& trace, const Snapshot& snap);

/// Number of snapshots whose parent pointers contain a cycle.
std::size_t cycle_snapshots(const Trace& trace);

// Timing ------------------------------------------------------------------------------

/// Earliest snapshot time from which |error| stays below `threshold_ns`
/// for at least 3 * max(T_F). nullopt when that never happens.
std::optional<Nanos> convergence_time(const Trace& trace, const NodeId& node, double threshold_ns);

/// A trace is settled at `t` when no parent or reference-quality change
/// happened in (t - 3 * max(T_F), t].
bool settled_at(const Trace& trace, Nanos t);

/// Earliest t >= from at which the trace is settled, or nullopt.
std::optional<Nanos> settle_time(const Trace& trace, Nanos from = Nanos{0});

// Pairing -----------------------------------------------------------------------------

struct LinkPairing {
    NodeId master;
    NodeId slave;
    std::uint64_t fups_rx = 0;
    std::uint64_t fups_paired = 0;
    std::uint64_t max_matches = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;  // matches -> count

    double success_rate() const
    {
        return fups_rx == 0 ? 0.0 : static_cast<double>(fups_paired) / static_cast<double>(fups_rx);
    }
};

/// One entry per (master, slave) with at least one received follow-up,
/// ordered by (master, slave).
std::vector<LinkPairing> pairing_stats(const Trace& trace);

// Summary -----------------------------------------------------------------------------

struct NodeSummary {
    NodeId id;
    std::optional<Nanos> convergence;
    std::optional<NodeId> final_parent;
    std::size_t samples = 0;  // error samples after settling
    double mean_abs_error_ns = 0.0;
    double max_abs_error_ns = 0.0;
};

struct RunSummary {
    double threshold_ns = 0.0;
    std::optional<Nanos> settled;
    TreeSnapshot final_tree;
    std::vector<NodeSummary> nodes;
    std::size_t cycle_snapshots = 0;
    std::size_t invariant_violations = 0;
    MessageCounts counts;
    double mean_abs_error_ns = 0.0;
    double max_abs_error_ns = 0.0;
    double pairing_success = 0.0;

    bool protocol_violation() const { return cycle_snapshots > 0 || invariant_violations > 0; }
};

inline constexpr double kDefaultConvergenceThresholdNs = 100'000.0;

RunSummary summarize(const Trace& trace, double threshold_ns = kDefaultConvergenceThresholdNs);

// CSV ---------------------------------------------------------------------------------

/// Seconds with exactly nine decimals, e.g. "12.000000250".
std::string format_seconds(Nanos t);
/// Inverse of format_seconds; exact for up to nine decimals.
std::optional<Nanos> parse_seconds(std::string_view text);

void write_errors_csv(const Trace& trace, const std::filesystem::path& path);
void write_tree_csv(const Trace& trace, const std::filesystem::path& path);
void write_events_csv(const Trace& trace, const std::filesystem::path& path);
void write_pairing_csv(const Trace& trace, const std::filesystem::path& path);
void write_summary(const RunSummary& summary, const std::filesystem::path& path);

/// Reads an errors.csv back. Throws std::runtime_error with the path and
/// line on malformed content.
std::vector<ErrorSample> read_errors_csv(const std::filesystem::path& path);

inline constexpr const char* kOutputFiles[] = {"errors.csv", "tree.csv", "events.csv", "pairing.csv",
                                               "summary.txt"};

/// Writes all five outputs into `dir` (which must exist) and returns the
/// summary.
RunSummary export_all(const Trace& trace, const std::filesystem::path& dir,
                      double threshold_ns = kDefaultConvergenceThresholdNs);

}  // namespace domino

#endif  // DOMINO_ANALYSIS_HPP
