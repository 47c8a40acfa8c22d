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

// engine.hpp
//
// Per-station protocol state machine: beacon logging, follow-up
// generation, pairing and clock adjustment, parent-clock selection with
// hysteresis, and the wireless best-master-clock rules. The engine is
// sans-IO: it consumes events stamped with the station's own clock and
// returns actions; it owns no clock, timer, or socket.
//
// Timing contract with the harness:
//  - every Timestamp passed in is a reading of the station's disciplined
//    local clock;
//  - every AdjustOffset action must be applied to that clock before the
//    next event is delivered. The engine re-expresses its own stored
//    timestamps in the stepped time base when it emits the action.

#ifndef DOMINO_ENGINE_HPP
#define DOMINO_ENGINE_HPP

#include <domino/error.hpp>
#include <domino/timebase.hpp>
#include <domino/wire.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace domino {

using namespace std::chrono_literals;

enum class StationKind {
    ffts,  // full function: slave, boundary and (optionally) grandmaster
    rfts,  // reduced function: slave only
};

struct NodeRole {
    StationKind kind = StationKind::ffts;
    bool gc_capable = false;
    ClockQuality q_local = ClockQuality::infinite();

    static NodeRole grandmaster(const ClockQuality& q) { return {StationKind::ffts, true, q}; }
    static NodeRole boundary() { return {StationKind::ffts, false, ClockQuality::infinite()}; }
    static NodeRole slave_only() { return {StationKind::rfts, false, ClockQuality::infinite()}; }

    /// Throws ConfigError when the combination is inconsistent.
    void validate() const;
};

struct EngineConfig {
    Nanos t_fup = 2s;                      // follow-up period
    double ema_alpha = 0.125;              // mean-intertime smoothing
    double beta = 2.0;                     // first-estimate multiplier
    Nanos t0 = 1s;                         // first-estimate additive term
    double hysteresis_alpha = 0.875;       // parent switch ratio
    Nanos t_pcl = 60s;                     // parent clock entry lifetime
    double e_f_local_ppm = 10.0;           // assumed residual tolerance
    std::size_t fup_records_max = 8;
    std::size_t sync_list_capacity = 64;

    double fup_jitter = 0.05;              // +/- fraction of t_fup
    bool rate_correction = true;
    Nanos min_rate_baseline = 500ms;
    // How long a quality stays subject to the feasibility check after this
    // station last advertised it. Stale information can outlive its source
    // by t_pcl plus one follow-up period per hop, so this should exceed
    // t_pcl comfortably.
    Nanos feasibility_hold = 120s;
    // A relayed source is only adopted when its sequence number first
    // reached this station at most this long ago. A live source advances
    // once per t_fup.
    Nanos source_freshness = 6s;
    // After a restart, neighbours may still list this station's previous
    // incarnation as their parent. For this long after construction only
    // sources that advertise themselves (sq identity == sender) are
    // followed. Zero disables it.
    Nanos rejoin_holddown{0};
    // Opt-in: admit non-parent sources whose quality equals the reference
    // quality (still subject to the feasibility check).
    bool accept_equal_quality = false;
    // Test-only: skips every quality and feasibility check so that loops
    // can be manufactured.
    bool debug_disable_sq_gate = false;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Bounded list of logged beacons ordered by arrival timestamp. The oldest
/// entry is evicted when full.
class SyncList {
  public:
    explicit SyncList(std::size_t capacity);

    /// False (and no change) when (ap, tsf) is already present.
    bool insert(const BeaconRecord& record);

    const std::vector<BeaconRecord>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t capacity() const { return capacity_; }

    /// Up to `n` newest entries, ascending t.
    std::vector<BeaconRecord> most_recent(std::size_t n) const;

    void shift(Nanos delta);
    void clear() { entries_.clear(); }

  private:
    std::size_t capacity_;
    std::vector<BeaconRecord> entries_;
};

struct Match {
    BeaconRecord remote;
    BeaconRecord local;

    bool operator==(const Match&) const = default;
};

/// Every (remote, local) pair with equal AP identity and TSF, ordered by
/// local t, then (ap, tsf), then remote t.
std::vector<Match> pair(std::span<const BeaconRecord> remote, std::span<const BeaconRecord> local);

/// Link-quality record kept per candidate master.
struct ClockQualityEntry {
    NodeId master;
    ErrorEstimate e;                    // the master's own estimate, from its follow-up
    Timestamp tau{0};                   // local arrival of the last paired follow-up
    std::optional<Nanos> mean_intertime;  // undefined until the second pairing
    ClockQuality q;                     // source quality of the last paired follow-up
    std::uint32_t source_seq = 0;       // newest source sequence number relayed by the master
    Timestamp seq_since{0};             // local arrival when source_seq last advanced

    bool operator==(const ClockQualityEntry&) const = default;
};

/// Mean error of following `entry`: e + e_f * T / 2, or infinity while the
/// mean intertime is undefined. Integer nanoseconds, rounded half away
/// from zero.
ErrorEstimate estimate_link_error(const ClockQualityEntry& entry, double e_f_local_ppm);

/// First update: T = beta * (tau - tau') + T0. Later updates:
/// T = alpha * (tau - tau') + (1 - alpha) * T'. Throws ContractViolation
/// unless tau_new > entry.tau.
void update_mean_intertime(ClockQualityEntry& entry, Timestamp tau_new, const EngineConfig& cfg);

// Actions --------------------------------------------------------------------

struct AdjustOffset {
    Nanos offset{0};  // subtract from the clock
};

struct AdjustRate {
    double factor = 1.0;  // multiply the rate correction
};

struct ParentChanged {
    std::optional<NodeId> old_parent;
    std::optional<NodeId> new_parent;
};

struct QrefChanged {
    ClockQuality old_q;
    ClockQuality new_q;
};

enum class IgnoreReason {
    self,        // own follow-up echoed back
    quality,     // source quality not acceptable
    no_match,    // pairing found nothing
    infeasible,  // quality acceptable but the source may derive from us
    stale,       // relayed source sequence number too old
};

struct Ignored {
    IgnoreReason reason;
};

using Action = std::variant<AdjustOffset, AdjustRate, ParentChanged, QrefChanged, Ignored>;

const char* to_string(IgnoreReason reason);
std::string describe(const Action& action);

struct FupOutcome {
    std::vector<Action> actions;
    std::size_t matches = 0;  // pairing result size; 0 for own messages
};

struct TickOutcome {
    std::vector<Action> actions;
    std::optional<FupMessage> fup;
};

enum class SyncStatus { unsynchronized, synchronized };

struct EngineDiagnostics {
    std::uint64_t beacons_logged = 0;
    std::uint64_t duplicate_beacons = 0;
    std::uint64_t fups_built = 0;
    std::uint64_t fups_received = 0;
    std::uint64_t fups_paired = 0;
};

/// Newest source sequence number this station has advertised for a quality,
/// the lowest error advertised with it, and when the quality was last
/// advertised. A relayed offer is feasible when it carries a newer sequence
/// number, or the same one with a strictly lower error.
struct Feasibility {
    std::uint32_t source_seq = 0;
    ErrorEstimate min_e = ErrorEstimate::infinite();
    Timestamp last_advertised{0};
};

class Engine {
  public:
    /// `start` is the local time the engine is created at; the first
    /// follow-up falls due one jittered period later. `gc_error` is the
    /// error advertised while acting as grandmaster.
    Engine(NodeId self, NodeRole role, EngineConfig cfg, ErrorEstimate gc_error, Timestamp start,
           std::uint64_t seed);

    // Events -----------------------------------------------------------------

    /// Logs a beacon heard from any AP. Duplicates are counted and dropped.
    void on_beacon(const Beacon& beacon, Timestamp local_t);

    /// Follow-up with the newest sync-list records, or nullopt when the
    /// list is empty. Throws RoleViolation on reduced-function stations.
    std::optional<FupMessage> build_fup(Timestamp now);

    FupOutcome on_fup(const FupMessage& msg, Timestamp arrival_tau);

    /// Re-evaluates the parent after a parent-table change.
    std::vector<Action> select_parent();

    /// Drops entries not refreshed within t_pcl, or whose source sequence
    /// number has not advanced within t_pcl, and re-selects.
    std::vector<Action> expire_entries(Timestamp now);

    /// Timer entry point: expiry sweep plus the periodic follow-up.
    TickOutcome tick(Timestamp now);

    // Queries ----------------------------------------------------------------

    ErrorEstimate estimate_own_error() const;

    const NodeId& id() const { return self_; }
    const NodeRole& role() const { return role_; }
    const EngineConfig& config() const { return cfg_; }
    const SyncList& sync_list() const { return sync_list_; }
    const std::map<NodeId, ClockQualityEntry>& parent_table() const { return table_; }
    const std::optional<NodeId>& parent() const { return parent_; }
    const ClockQuality& q_ref() const { return q_ref_; }
    SyncStatus sync_status() const { return parent_ ? SyncStatus::synchronized : SyncStatus::unsynchronized; }
    bool acting_gc() const { return role_.gc_capable && !parent_; }
    const std::optional<SyncSample>& last_sample() const { return last_sample_; }
    const std::map<ClockQuality, Feasibility>& feasibility() const { return feasibility_; }
    const EngineDiagnostics& diagnostics() const { return diag_; }
    Timestamp next_fup_due() const { return next_fup_due_; }

    /// Human-readable list of broken state invariants; empty when sound.
    std::vector<std::string> invariant_violations() const;

  private:
    bool admissible(const ClockQuality& q) const;
    bool feasible(const FupMessage& msg) const;
    void note_source(const FupMessage& msg, Timestamp now);
    bool fresh(const FupMessage& msg, Timestamp now) const;
    void shift_time_base(Nanos delta);
    Nanos jittered_period();

    NodeId self_;
    NodeRole role_;
    EngineConfig cfg_;
    ErrorEstimate gc_error_;
    SyncList sync_list_;
    std::map<NodeId, ClockQualityEntry> table_;
    std::optional<NodeId> parent_;
    ClockQuality q_ref_;
    std::optional<SyncSample> last_sample_;
    std::map<ClockQuality, Feasibility> feasibility_;
    // first local arrival of each recent source sequence number, per quality
    std::map<ClockQuality, std::map<std::uint32_t, Timestamp>> heard_;
    Timestamp next_fup_due_{0};
    Timestamp holddown_until_{0};
    std::uint32_t seq_ = 0;
    std::mt19937_64 rng_;
    EngineDiagnostics diag_;
};

}  // namespace domino

#endif  // DOMINO_ENGINE_HPP
