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

// simnet.hpp
//
// Deterministic discrete-event model of an extended service set: APs
// emitting beacons, per-link loss, the wired backbone that relays
// follow-ups to every BSS, scripted mobility, and the trace the run
// leaves behind.

#ifndef DOMINO_SIMNET_HPP
#define DOMINO_SIMNET_HPP

#include <domino/engine.hpp>
#include <domino/timebase.hpp>
#include <domino/wire.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace domino {

// Topology ----------------------------------------------------------------------

struct ApSpec {
    NodeId id;
    Nanos beacon_period = 102'400us;
    Tsf tsf_start;
    Nanos beacon_phase{0};
};

struct StaSpec {
    NodeId id;
    NodeRole role;
    double freq_error_ppm = 0.0;
    ErrorEstimate gc_error = ErrorEstimate::infinite();
    EngineConfig engine;
    Nanos initial_offset{0};  // local reading at true time zero
    bool active = true;       // false: starts powered off
};

/// (ap, sta) pair.
using Link = std::pair<NodeId, NodeId>;

struct Topology {
    std::vector<ApSpec> aps;
    std::vector<StaSpec> stas;
    std::map<NodeId, NodeId> association;  // sta -> ap
    std::set<Link> hearability;
    std::map<Link, Nanos> propagation_delay;  // absent: zero

    const ApSpec* find_ap(const NodeId& id) const;
    const StaSpec* find_sta(const NodeId& id) const;

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

// Loss ----------------------------------------------------------------------------

/// Two-state Gilbert channel: from the good state a frame enters the bad
/// state with `enter_prob`; the bad state lasts `mean_length` frames on
/// average and drops everything.
struct BurstModel {
    double mean_length = 1.0;
    double enter_prob = 0.0;
};

struct LossModel {
    double wireless_loss_prob = 0.0;
    std::optional<BurstModel> burst;
    // Per-class overrides of wireless_loss_prob.
    std::optional<double> beacon_loss_prob;
    std::optional<double> fup_loss_prob;

    void validate() const;
};

// Mobility --------------------------------------------------------------------------

enum class MobilityOp {
    add,        // sta starts hearing ap
    remove,     // sta stops hearing ap
    associate,  // sta re-associates to ap (must be heard)
    node_down,  // sta powers off
    node_up,    // sta powers on with a fresh engine; its oscillator kept running
};

struct MobilityEvent {
    Nanos time{0};
    MobilityOp op = MobilityOp::add;
    NodeId sta;
    NodeId ap;                         // unused for node_down / node_up
    std::optional<NodeId> reassociate;  // remove only
};

using MobilityScript = std::vector<MobilityEvent>;

const char* to_string(MobilityOp op);

// Scenario --------------------------------------------------------------------------

struct SimConfig {
    Nanos tick = 10ms;
    Nanos snapshot = 100ms;
    Nanos backbone_delay = 1ms;
    Nanos timestamp_jitter = 50ns;  // standard deviation

    void validate() const;
};

struct Scenario {
    Topology topology;
    LossModel loss;
    MobilityScript mobility;
    Nanos duration = 60s;
    std::uint64_t seed = 1;
    SimConfig sim;

    /// Checks the topology, loss model, and that replaying the mobility
    /// script never breaks association-within-hearability.
    void validate() const;
};

// Event queue -----------------------------------------------------------------------

/// Processing order among events at the same true time.
enum class EventKind : std::uint8_t {
    mobility,
    beacon_emit,
    beacon_arrival,
    fup_arrival,
    tick,
    snapshot,
};

struct Event {
    Nanos time{0};
    EventKind kind = EventKind::tick;
    NodeId node;  // AP for beacon_emit, receiving/affected STA otherwise
    std::uint64_t seq = 0;  // insertion counter, last tiebreak
    Beacon beacon;
    std::shared_ptr<const std::vector<std::uint8_t>> payload;  // encoded follow-up
    std::size_t mobility_index = 0;

    bool operator==(const Event& o) const
    {
        return time == o.time && kind == o.kind && node == o.node && seq == o.seq && beacon == o.beacon &&
               mobility_index == o.mobility_index &&
               (payload == o.payload || (payload && o.payload && *payload == *o.payload));
    }
};

class EventQueue {
  public:
    void push(Event ev);
    Event pop();
    const Event& top() const { return heap_.top(); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    /// Pops everything in processing order.
    std::vector<Event> drain();

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const;
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

/// Beacon emissions for every AP over [0, duration), one tick stream per
/// station (powered or not), mobility events, and periodic snapshots.
/// Throws ConfigError if the scenario does not validate.
EventQueue schedule_scenario(const Scenario& scenario);

// Channel ---------------------------------------------------------------------------

struct Delivery {
    NodeId sta;
    Nanos arrival{0};

    bool operator==(const Delivery&) const = default;
};

struct FupFate {
    bool uplink_lost = false;
    std::vector<Delivery> delivered;
    std::vector<NodeId> dropped;  // downlink losses
};

/// Mutable radio environment: current hearability, association, which
/// stations are powered, and the per-link loss state. Every directed link
/// draws from its own random stream so results do not depend on which
/// other links exist.
class Channel {
  public:
    Channel(const Topology& topology, const LossModel& loss, std::uint64_t seed, Nanos backbone_delay);

    /// Receivers of a beacon emitted at `emit_time`, in id order. Lost
    /// frames are counted in `dropped` when it is non-null.
    std::vector<Delivery> deliver_beacon(const Beacon& beacon, Nanos emit_time,
                                         std::vector<NodeId>* dropped = nullptr);

    /// Uplink to the sender's AP, lossless backbone, then one downlink per
    /// powered station other than the sender. Throws ConfigError if the
    /// sender is not associated.
    FupFate deliver_fup(const NodeId& sender, Nanos send_time);

    void apply(const MobilityEvent& ev);

    bool hears(const NodeId& ap, const NodeId& sta) const { return hearability_.count({ap, sta}) != 0; }
    std::optional<NodeId> associated_ap(const NodeId& sta) const;
    bool is_active(const NodeId& sta) const { return active_.count(sta) != 0; }
    void set_active(const NodeId& sta, bool active);

  private:
    struct LinkState {
        std::mt19937_64 rng;
        bool bad = false;
    };

    bool lost(const NodeId& from, const NodeId& to, double p);
    LinkState& link(const NodeId& from, const NodeId& to);

    std::set<Link> hearability_;
    std::map<Link, Nanos> delay_;
    std::map<NodeId, NodeId> association_;
    std::set<NodeId> active_;
    std::vector<NodeId> stas_;  // id order
    LossModel loss_;
    std::uint64_t seed_;
    Nanos backbone_delay_;
    std::map<std::pair<NodeId, NodeId>, LinkState> links_;
};

// Trace -----------------------------------------------------------------------------

enum class TraceKind : std::uint8_t {
    fup_tx,
    fup_uplink_drop,
    fup_rx,
    fup_drop,
    offset,
    rate,
    parent,
    qref,
    ignored,
    mobility,
    node_down,
    node_up,
    violation,
};

const char* to_string(TraceKind kind);

struct TraceRecord {
    Nanos time{0};
    NodeId node;
    TraceKind kind = TraceKind::violation;
    std::optional<NodeId> peer;  // sender for fup_rx/fup_drop, new parent for parent
    std::int64_t value = 0;      // matches for fup_rx, offset ns, record count for fup_tx
    std::string detail;

    bool operator==(const TraceRecord&) const = default;
};

struct NodeInfo {
    NodeId id;
    StationKind kind = StationKind::ffts;
    bool gc_capable = false;
    ClockQuality q_local;
    Nanos t_fup{0};
    bool initially_active = true;
};

struct NodeSnapshot {
    Timestamp local{0};
    std::optional<NodeId> parent;
    ClockQuality q_ref;
    bool acting_gc = false;
    bool active = false;
    ErrorEstimate own_error = ErrorEstimate::infinite();

    bool operator==(const NodeSnapshot&) const = default;
};

/// State of every station at one instant, indexed like Trace::nodes.
struct Snapshot {
    Nanos time{0};
    std::vector<NodeSnapshot> nodes;

    bool operator==(const Snapshot&) const = default;
};

/// Delivery accounting per message class.
struct MessageCounts {
    std::uint64_t beacons_emitted = 0;
    std::uint64_t beacon_attempts = 0;  // one per (beacon, hearer)
    std::uint64_t beacons_delivered = 0;
    std::uint64_t beacons_dropped = 0;
    std::uint64_t fups_emitted = 0;
    std::uint64_t fups_uplink_dropped = 0;
    std::uint64_t fup_attempts = 0;  // downlink legs after a successful uplink
    std::uint64_t fups_delivered = 0;
    std::uint64_t fups_dropped = 0;

    bool operator==(const MessageCounts&) const = default;
};

struct Trace {
    std::vector<NodeInfo> nodes;  // topology order
    std::vector<TraceRecord> records;
    std::vector<Snapshot> snapshots;
    MessageCounts counts;
    Nanos duration{0};

    /// Index into `nodes`, or nullopt.
    std::optional<std::size_t> index_of(const NodeId& id) const;
    Nanos max_t_fup() const;

    bool operator==(const Trace& o) const
    {
        return records == o.records && snapshots == o.snapshots && counts == o.counts && duration == o.duration;
    }
};

/// Processes `queue` against fresh node state built from `scenario`.
/// Identical inputs give identical traces.
Trace run(EventQueue queue, const Scenario& scenario);

/// schedule_scenario followed by run.
Trace simulate(const Scenario& scenario);

}  // namespace domino

#endif  // DOMINO_SIMNET_HPP
