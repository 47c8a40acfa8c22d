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

#include <domino/simnet.hpp>

#include <algorithm>
#include <sstream>

namespace domino {

namespace {

enum class Stream : std::uint32_t { link = 1, jitter = 2, engine = 3 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(stream), lo(a), hi(a), lo(b), hi(b)};
    return std::mt19937_64(seq);
}

std::uint64_t engine_seed(std::uint64_t seed, const NodeId& id, std::uint64_t incarnation)
{
    auto rng = make_rng(seed, Stream::engine, id.to_u64(), incarnation);
    return rng();
}

void check_probability(const std::string& key, double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(key, "must lie in [0, 1]");
    }
}

}  // namespace

const char* to_string(MobilityOp op)
{
    switch (op) {
    case MobilityOp::add:
        return "add";
    case MobilityOp::remove:
        return "remove";
    case MobilityOp::associate:
        return "associate";
    case MobilityOp::node_down:
        return "node_down";
    case MobilityOp::node_up:
        return "node_up";
    }
    return "?";
}

const char* to_string(TraceKind kind)
{
    switch (kind) {
    case TraceKind::fup_tx:
        return "fup_tx";
    case TraceKind::fup_uplink_drop:
        return "fup_uplink_drop";
    case TraceKind::fup_rx:
        return "fup_rx";
    case TraceKind::fup_drop:
        return "fup_drop";
    case TraceKind::offset:
        return "offset";
    case TraceKind::rate:
        return "rate";
    case TraceKind::parent:
        return "parent";
    case TraceKind::qref:
        return "qref";
    case TraceKind::ignored:
        return "ignored";
    case TraceKind::mobility:
        return "mobility";
    case TraceKind::node_down:
        return "node_down";
    case TraceKind::node_up:
        return "node_up";
    case TraceKind::violation:
        return "violation";
    }
    return "?";
}

// Topology ----------------------------------------------------------------------

const ApSpec* Topology::find_ap(const NodeId& id) const
{
    auto it = std::find_if(aps.begin(), aps.end(), [&](const ApSpec& a) { return a.id == id; });
    return it == aps.end() ? nullptr : &*it;
}

const StaSpec* Topology::find_sta(const NodeId& id) const
{
    auto it = std::find_if(stas.begin(), stas.end(), [&](const StaSpec& s) { return s.id == id; });
    return it == stas.end() ? nullptr : &*it;
}

void Topology::validate() const
{
    std::set<NodeId> seen;
    for (const auto& ap : aps) {
        if (!seen.insert(ap.id).second) {
            throw ConfigError("aps", "duplicate id " + ap.id.to_string());
        }
        if (ap.beacon_period <= Nanos{0}) {
            throw ConfigError("beacon_period", "must be positive for ap " + ap.id.to_string());
        }
        if (ap.beacon_phase < Nanos{0}) {
            throw ConfigError("phase", "must be >= 0 for ap " + ap.id.to_string());
        }
    }
    for (const auto& sta : stas) {
        const std::string who = " for sta " + sta.id.to_string();
        if (!seen.insert(sta.id).second) {
            throw ConfigError("stas", "duplicate id " + sta.id.to_string());
        }
        try {
            sta.role.validate();
            sta.engine.validate();
        }
        catch (const ConfigError& e) {
            throw ConfigError(e.key(), std::string(e.what()).substr(e.key().size() + 2) + who);
        }
        if (sta.role.gc_capable && sta.role.q_local.identity != sta.id) {
            throw ConfigError("quality", "identity must equal the station id" + who);
        }
        if (sta.role.gc_capable == sta.gc_error.is_infinite()) {
            throw ConfigError("gc_error_ns", "must be set exactly for grandmaster-capable stations" + who);
        }
        if (!(std::abs(sta.freq_error_ppm) <= kMaxFreqErrorPpm)) {
            throw ConfigError("freq_error_ppm", "magnitude exceeds 100 ppm" + who);
        }
        auto assoc = association.find(sta.id);
        if (assoc == association.end()) {
            throw ConfigError("association", "sta " + sta.id.to_string() + " is not associated");
        }
        if (!find_ap(assoc->second)) {
            throw ConfigError("association", "unknown ap " + assoc->second.to_string() + who);
        }
        if (!hearability.count({assoc->second, sta.id})) {
            throw ConfigError("association", "sta " + sta.id.to_string() + " cannot hear its ap " +
                                                 assoc->second.to_string());
        }
    }
    for (const auto& [sta, ap] : association) {
        if (!find_sta(sta)) {
            throw ConfigError("association", "unknown sta " + sta.to_string());
        }
    }
    for (const auto& [ap, sta] : hearability) {
        if (!find_ap(ap)) {
            throw ConfigError("hearability", "unknown ap " + ap.to_string());
        }
        if (!find_sta(sta)) {
            throw ConfigError("hearability", "unknown sta " + sta.to_string());
        }
    }
    for (const auto& [link, d] : propagation_delay) {
        if (d < Nanos{0}) {
            throw ConfigError("delay", "must be >= 0");
        }
    }
}

void LossModel::validate() const
{
    check_probability("wireless_loss_prob", wireless_loss_prob);
    if (beacon_loss_prob) {
        check_probability("beacon_loss_prob", *beacon_loss_prob);
    }
    if (fup_loss_prob) {
        check_probability("fup_loss_prob", *fup_loss_prob);
    }
    if (burst) {
        if (!(burst->mean_length >= 1.0)) {
            throw ConfigError("mean_length", "must be >= 1");
        }
        check_probability("enter_prob", burst->enter_prob);
    }
}

void SimConfig::validate() const
{
    if (tick <= Nanos{0}) {
        throw ConfigError("tick", "must be positive");
    }
    if (snapshot <= Nanos{0}) {
        throw ConfigError("snapshot", "must be positive");
    }
    if (backbone_delay < Nanos{0}) {
        throw ConfigError("backbone_delay", "must be >= 0");
    }
    if (timestamp_jitter < Nanos{0}) {
        throw ConfigError("timestamp_jitter", "must be >= 0");
    }
}

void Scenario::validate() const
{
    if (duration <= Nanos{0}) {
        throw ConfigError("duration", "must be positive");
    }
    topology.validate();
    loss.validate();
    sim.validate();

    std::set<Link> hear = topology.hearability;
    std::map<NodeId, NodeId> assoc = topology.association;
    std::vector<std::size_t> order(mobility.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mobility[a].time < mobility[b].time; });
    for (std::size_t i : order) {
        const auto& ev = mobility[i];
        const std::string key = "mobility[" + std::to_string(i) + "]";
        if (ev.time < Nanos{0}) {
            throw ConfigError(key, "time must be >= 0");
        }
        if (!topology.find_sta(ev.sta)) {
            throw ConfigError(key, "unknown sta " + ev.sta.to_string());
        }
        const bool needs_ap = ev.op == MobilityOp::add || ev.op == MobilityOp::remove || ev.op == MobilityOp::associate;
        if (needs_ap && !topology.find_ap(ev.ap)) {
            throw ConfigError(key, "unknown ap " + ev.ap.to_string());
        }
        switch (ev.op) {
        case MobilityOp::add:
            hear.insert({ev.ap, ev.sta});
            break;
        case MobilityOp::remove:
            hear.erase({ev.ap, ev.sta});
            if (ev.reassociate) {
                if (!hear.count({*ev.reassociate, ev.sta})) {
                    throw ConfigError(key, "re-association target " + ev.reassociate->to_string() + " is not heard");
                }
                assoc[ev.sta] = *ev.reassociate;
            }
            if (assoc.at(ev.sta) == ev.ap) {
                throw ConfigError(key, "removes the associated ap of " + ev.sta.to_string() +
                                           " without re-association");
            }
            break;
        case MobilityOp::associate:
            if (!hear.count({ev.ap, ev.sta})) {
                throw ConfigError(key, "associates to an ap that is not heard");
            }
            assoc[ev.sta] = ev.ap;
            break;
        case MobilityOp::node_down:
        case MobilityOp::node_up:
            break;
        }
        if (ev.op != MobilityOp::remove && ev.reassociate) {
            throw ConfigError(key, "reassociate is only valid with remove");
        }
    }
}

// Event queue -----------------------------------------------------------------------

bool EventQueue::Later::operator()(const Event& a, const Event& b) const
{
    return std::tie(a.time, a.kind, a.node, a.seq) > std::tie(b.time, b.kind, b.node, b.seq);
}

void EventQueue::push(Event ev)
{
    ev.seq = next_seq_++;
    heap_.push(std::move(ev));
}

Event EventQueue::pop()
{
    Event ev = heap_.top();
    heap_.pop();
    return ev;
}

std::vector<Event> EventQueue::drain()
{
    std::vector<Event> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
        out.push_back(pop());
    }
    return out;
}

EventQueue schedule_scenario(const Scenario& sc)
{
    sc.validate();
    EventQueue q;
    for (const auto& ap : sc.topology.aps) {
        for (Nanos t = ap.beacon_phase; t < sc.duration; t += ap.beacon_period) {
            Event ev;
            ev.time = t;
            ev.kind = EventKind::beacon_emit;
            ev.node = ap.id;
            ev.beacon = Beacon{ap.id, Tsf{ap.tsf_start.value + static_cast<std::uint64_t>(t.count() / 1000)}};
            q.push(std::move(ev));
        }
    }
    for (std::size_t i = 0; i < sc.mobility.size(); ++i) {
        Event ev;
        ev.time = sc.mobility[i].time;
        ev.kind = EventKind::mobility;
        ev.node = sc.mobility[i].sta;
        ev.mobility_index = i;
        q.push(std::move(ev));
    }
    for (const auto& sta : sc.topology.stas) {
        for (Nanos t{0}; t < sc.duration; t += sc.sim.tick) {
            Event ev;
            ev.time = t;
            ev.kind = EventKind::tick;
            ev.node = sta.id;
            q.push(std::move(ev));
        }
    }
    for (Nanos t{0}; t <= sc.duration; t += sc.sim.snapshot) {
        Event ev;
        ev.time = t;
        ev.kind = EventKind::snapshot;
        q.push(std::move(ev));
    }
    return q;
}

// Channel ---------------------------------------------------------------------------

Channel::Channel(const Topology& topology, const LossModel& loss, std::uint64_t seed, Nanos backbone_delay)
    : hearability_(topology.hearability),
      delay_(topology.propagation_delay),
      association_(topology.association),
      loss_(loss),
      seed_(seed),
      backbone_delay_(backbone_delay)
{
    for (const auto& sta : topology.stas) {
        stas_.push_back(sta.id);
        if (sta.active) {
            active_.insert(sta.id);
        }
    }
    std::sort(stas_.begin(), stas_.end());
}

std::optional<NodeId> Channel::associated_ap(const NodeId& sta) const
{
    auto it = association_.find(sta);
    if (it == association_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void Channel::set_active(const NodeId& sta, bool active)
{
    if (active) {
        active_.insert(sta);
    }
    else {
        active_.erase(sta);
    }
}

Channel::LinkState& Channel::link(const NodeId& from, const NodeId& to)
{
    auto it = links_.find({from, to});
    if (it == links_.end()) {
        it = links_.emplace(std::pair{from, to}, LinkState{make_rng(seed_, Stream::link, from.to_u64(), to.to_u64())})
                 .first;
    }
    return it->second;
}

bool Channel::lost(const NodeId& from, const NodeId& to, double p)
{
    if (!loss_.burst && p <= 0.0) {
        return false;
    }
    auto& s = link(from, to);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool drop = false;
    if (s.bad) {
        drop = true;
    }
    else {
        drop = p > 0.0 && u(s.rng) < p;
    }
    if (loss_.burst) {
        if (s.bad) {
            s.bad = !(u(s.rng) < 1.0 / loss_.burst->mean_length);
        }
        else {
            s.bad = u(s.rng) < loss_.burst->enter_prob;
        }
    }
    return drop;
}

std::vector<Delivery> Channel::deliver_beacon(const Beacon& beacon, Nanos emit_time, std::vector<NodeId>* dropped)
{
    std::vector<Delivery> out;
    const double p = loss_.beacon_loss_prob.value_or(loss_.wireless_loss_prob);
    for (const auto& sta : stas_) {
        if (!is_active(sta) || !hears(beacon.ap, sta)) {
            continue;
        }
        if (lost(beacon.ap, sta, p)) {
            if (dropped) {
                dropped->push_back(sta);
            }
            continue;
        }
        auto d = delay_.find({beacon.ap, sta});
        out.push_back({sta, emit_time + (d == delay_.end() ? Nanos{0} : d->second)});
    }
    return out;
}

FupFate Channel::deliver_fup(const NodeId& sender, Nanos send_time)
{
    const auto ap = associated_ap(sender);
    if (!ap) {
        throw ConfigError("association", "sender " + sender.to_string() + " is not associated");
    }
    FupFate fate;
    const double p = loss_.fup_loss_prob.value_or(loss_.wireless_loss_prob);
    if (lost(sender, *ap, p)) {
        fate.uplink_lost = true;
        return fate;
    }
    for (const auto& sta : stas_) {
        if (sta == sender || !is_active(sta)) {
            continue;
        }
        const NodeId rx_ap = association_.at(sta);
        if (lost(rx_ap, sta, p)) {
            fate.dropped.push_back(sta);
            continue;
        }
        auto d = delay_.find({rx_ap, sta});
        fate.delivered.push_back({sta, send_time + backbone_delay_ + (d == delay_.end() ? Nanos{0} : d->second)});
    }
    return fate;
}

void Channel::apply(const MobilityEvent& ev)
{
    switch (ev.op) {
    case MobilityOp::add:
        hearability_.insert({ev.ap, ev.sta});
        break;
    case MobilityOp::remove:
        hearability_.erase({ev.ap, ev.sta});
        if (ev.reassociate) {
            association_[ev.sta] = *ev.reassociate;
        }
        break;
    case MobilityOp::associate:
        association_[ev.sta] = ev.ap;
        break;
    case MobilityOp::node_down:
        set_active(ev.sta, false);
        break;
    case MobilityOp::node_up:
        set_active(ev.sta, true);
        break;
    }
}

// Trace -------------------------------------------------------------------------------

std::optional<std::size_t> Trace::index_of(const NodeId& id) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

Nanos Trace::max_t_fup() const
{
    Nanos m{0};
    for (const auto& n : nodes) {
        m = std::max(m, n.t_fup);
    }
    return m;
}

// Runner ------------------------------------------------------------------------------

namespace {

struct SimNode {
    const StaSpec* spec;
    VirtualClock clock;
    std::optional<Engine> engine;
    std::mt19937_64 jitter_rng;
    std::uint64_t incarnation = 0;
};

class Runner {
  public:
    explicit Runner(const Scenario& sc)
        : sc_(sc), channel_(sc.topology, sc.loss, sc.seed, sc.sim.backbone_delay)
    {
        trace_.duration = sc.duration;
        nodes_.reserve(sc.topology.stas.size());
        for (const auto& sta : sc.topology.stas) {
            index_.emplace(sta.id, nodes_.size());
            nodes_.push_back(SimNode{&sta, VirtualClock(sta.freq_error_ppm, sta.initial_offset), std::nullopt,
                                     make_rng(sc.seed, Stream::jitter, sta.id.to_u64())});
            trace_.nodes.push_back(
                NodeInfo{sta.id, sta.role.kind, sta.role.gc_capable, sta.role.q_local, sta.engine.t_fup, sta.active});
            if (sta.active) {
                start_engine(nodes_.back(), Nanos{0});
            }
        }
    }

    void handle(const Event& ev, EventQueue& q)
    {
        switch (ev.kind) {
        case EventKind::mobility:
            on_mobility(ev);
            break;
        case EventKind::beacon_emit:
            on_beacon_emit(ev, q);
            break;
        case EventKind::beacon_arrival:
            on_beacon_arrival(ev);
            break;
        case EventKind::fup_arrival:
            on_fup_arrival(ev);
            break;
        case EventKind::tick:
            on_tick(ev, q);
            break;
        case EventKind::snapshot:
            on_snapshot(ev);
            break;
        }
    }

    Trace take() { return std::move(trace_); }

  private:
    SimNode& node(const NodeId& id) { return nodes_.at(index_.at(id)); }

    void start_engine(SimNode& n, Nanos now)
    {
        const Timestamp local = n.clock.read(now);
        EngineConfig cfg = n.spec->engine;
        if (n.incarnation > 0) {
            cfg.rejoin_holddown = cfg.t_pcl + cfg.t_fup;
        }
        n.engine.emplace(n.spec->id, n.spec->role, cfg, n.spec->gc_error, local,
                         engine_seed(sc_.seed, n.spec->id, n.incarnation++));
    }

    void record(Nanos t, const NodeId& id, TraceKind kind, std::optional<NodeId> peer = std::nullopt,
                std::int64_t value = 0, std::string detail = {})
    {
        trace_.records.push_back(TraceRecord{t, id, kind, peer, value, std::move(detail)});
    }

    Timestamp capture(SimNode& n, Nanos t)
    {
        Timestamp local = n.clock.read(t);
        if (sc_.sim.timestamp_jitter > Nanos{0}) {
            std::normal_distribution<double> noise(0.0, static_cast<double>(sc_.sim.timestamp_jitter.count()));
            local += Nanos(std::llround(noise(n.jitter_rng)));
        }
        return local;
    }

    void apply_actions(SimNode& n, const std::vector<Action>& actions, Nanos t)
    {
        const NodeId& id = n.spec->id;
        for (const auto& action : actions) {
            if (const auto* a = std::get_if<AdjustOffset>(&action)) {
                n.clock.apply_offset(a->offset);
                record(t, id, TraceKind::offset, std::nullopt, a->offset.count());
            }
            else if (const auto* r = std::get_if<AdjustRate>(&action)) {
                n.clock.apply_rate(r->factor, t);
                std::ostringstream os;
                os.precision(15);
                os << r->factor;
                record(t, id, TraceKind::rate, std::nullopt, 0, os.str());
            }
            else if (const auto* p = std::get_if<ParentChanged>(&action)) {
                record(t, id, TraceKind::parent, p->new_parent, 0, describe(action));
            }
            else if (std::holds_alternative<QrefChanged>(action)) {
                record(t, id, TraceKind::qref, std::nullopt, 0, describe(action));
            }
            else if (const auto* ig = std::get_if<Ignored>(&action)) {
                record(t, id, TraceKind::ignored, std::nullopt, 0, to_string(ig->reason));
            }
        }
    }

    void check_invariants(SimNode& n, Nanos t)
    {
        for (auto& v : n.engine->invariant_violations()) {
            record(t, n.spec->id, TraceKind::violation, std::nullopt, 0, std::move(v));
        }
    }

    void on_mobility(const Event& ev)
    {
        const auto& m = sc_.mobility.at(ev.mobility_index);
        auto& n = node(m.sta);
        switch (m.op) {
        case MobilityOp::node_down:
            if (n.engine) {
                n.engine.reset();
                channel_.set_active(m.sta, false);
                record(ev.time, m.sta, TraceKind::node_down);
            }
            return;
        case MobilityOp::node_up:
            if (!n.engine) {
                channel_.set_active(m.sta, true);
                start_engine(n, ev.time);
                record(ev.time, m.sta, TraceKind::node_up);
            }
            return;
        default:
            break;
        }
        channel_.apply(m);
        std::string detail = std::string(to_string(m.op)) + " " + m.ap.to_string();
        if (m.reassociate) {
            detail += " reassociate " + m.reassociate->to_string();
        }
        record(ev.time, m.sta, TraceKind::mobility, m.ap, 0, std::move(detail));
    }

    void on_beacon_emit(const Event& ev, EventQueue& q)
    {
        ++trace_.counts.beacons_emitted;
        std::vector<NodeId> dropped;
        const auto deliveries = channel_.deliver_beacon(ev.beacon, ev.time, &dropped);
        trace_.counts.beacon_attempts += deliveries.size() + dropped.size();
        trace_.counts.beacons_dropped += dropped.size();
        for (const auto& d : deliveries) {
            Event arrival;
            arrival.time = d.arrival;
            arrival.kind = EventKind::beacon_arrival;
            arrival.node = d.sta;
            arrival.beacon = ev.beacon;
            q.push(std::move(arrival));
        }
    }

    void on_beacon_arrival(const Event& ev)
    {
        auto& n = node(ev.node);
        if (!n.engine) {
            ++trace_.counts.beacons_dropped;
            return;
        }
        ++trace_.counts.beacons_delivered;
        n.engine->on_beacon(ev.beacon, capture(n, ev.time));
    }

    void send_fup(SimNode& n, const FupMessage& msg, Nanos t, EventQueue& q)
    {
        const NodeId& id = n.spec->id;
        ++trace_.counts.fups_emitted;
        record(t, id, TraceKind::fup_tx, std::nullopt, static_cast<std::int64_t>(msg.records.size()),
               "seq " + std::to_string(msg.seq));
        auto fate = channel_.deliver_fup(id, t);
        if (fate.uplink_lost) {
            ++trace_.counts.fups_uplink_dropped;
            record(t, id, TraceKind::fup_uplink_drop);
            return;
        }
        trace_.counts.fup_attempts += fate.delivered.size() + fate.dropped.size();
        trace_.counts.fups_dropped += fate.dropped.size();
        for (const auto& rx : fate.dropped) {
            record(t, rx, TraceKind::fup_drop, id);
        }
        auto bytes = std::make_shared<const std::vector<std::uint8_t>>(encode_fup(msg));
        for (const auto& d : fate.delivered) {
            Event arrival;
            arrival.time = d.arrival;
            arrival.kind = EventKind::fup_arrival;
            arrival.node = d.sta;
            arrival.payload = bytes;
            q.push(std::move(arrival));
        }
    }

    void on_fup_arrival(const Event& ev)
    {
        auto& n = node(ev.node);
        const FupMessage msg = decode_fup(*ev.payload);
        if (!n.engine) {
            ++trace_.counts.fups_dropped;
            record(ev.time, ev.node, TraceKind::fup_drop, msg.sender, 0, "down");
            return;
        }
        ++trace_.counts.fups_delivered;
        const auto outcome = n.engine->on_fup(msg, n.clock.read(ev.time));
        record(ev.time, ev.node, TraceKind::fup_rx, msg.sender, static_cast<std::int64_t>(outcome.matches));
        apply_actions(n, outcome.actions, ev.time);
        check_invariants(n, ev.time);
    }

    void on_tick(const Event& ev, EventQueue& q)
    {
        auto& n = node(ev.node);
        if (!n.engine) {
            return;
        }
        auto outcome = n.engine->tick(n.clock.read(ev.time));
        apply_actions(n, outcome.actions, ev.time);
        if (outcome.fup) {
            send_fup(n, *outcome.fup, ev.time, q);
        }
        if (!outcome.actions.empty()) {
            check_invariants(n, ev.time);
        }
    }

    void on_snapshot(const Event& ev)
    {
        Snapshot snap;
        snap.time = ev.time;
        snap.nodes.reserve(nodes_.size());
        for (auto& n : nodes_) {
            NodeSnapshot s;
            s.local = n.clock.peek(ev.time);
            s.q_ref = ClockQuality::infinite();
            if (n.engine) {
                s.active = true;
                s.parent = n.engine->parent();
                s.q_ref = n.engine->q_ref();
                s.acting_gc = n.engine->acting_gc();
                s.own_error = n.engine->estimate_own_error();
            }
            snap.nodes.push_back(s);
        }
        trace_.snapshots.push_back(std::move(snap));
    }

    const Scenario& sc_;
    Channel channel_;
    std::vector<SimNode> nodes_;
    std::map<NodeId, std::size_t> index_;
    Trace trace_;
};

}  // namespace

Trace run(EventQueue queue, const Scenario& scenario)
{
    Runner runner(scenario);
    while (!queue.empty()) {
        runner.handle(queue.pop(), queue);
    }
    return runner.take();
}

Trace simulate(const Scenario& scenario)
{
    return run(schedule_scenario(scenario), scenario);
}

}  // namespace domino
