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

#include <domino/engine.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace domino {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string to_string(const std::optional<NodeId>& id)
{
    return id ? id->to_string() : std::string("null");
}

bool hysteresis_allows(ErrorEstimate candidate, ErrorEstimate current, double ratio)
{
    if (candidate.is_infinite()) {
        return false;
    }
    if (current.is_infinite()) {
        return true;
    }
    return static_cast<long double>(candidate.ns()) <
           static_cast<long double>(ratio) * static_cast<long double>(current.ns());
}

}  // namespace

// NodeRole / EngineConfig -------------------------------------------------------

void NodeRole::validate() const
{
    if (kind == StationKind::rfts && gc_capable) {
        throw ConfigError("gc_capable", "a reduced-function station cannot act as grandmaster");
    }
    if (gc_capable && q_local.is_infinite()) {
        throw ConfigError("quality", "a grandmaster-capable station needs a finite local quality");
    }
    if (!gc_capable && !q_local.is_infinite()) {
        throw ConfigError("quality", "only grandmaster-capable stations carry a finite local quality");
    }
}

void EngineConfig::validate() const
{
    if (t_fup <= Nanos{0}) {
        throw ConfigError("t_fup", "must be positive");
    }
    if (!(ema_alpha > 0.0 && ema_alpha < 1.0)) {
        throw ConfigError("ema_alpha", "must lie in (0, 1)");
    }
    if (!(hysteresis_alpha > 0.0 && hysteresis_alpha < 1.0)) {
        throw ConfigError("hysteresis_alpha", "must lie in (0, 1)");
    }
    if (!(beta >= 1.0)) {
        throw ConfigError("beta", "must be >= 1");
    }
    if (t0 < Nanos{0}) {
        throw ConfigError("t0", "must be >= 0");
    }
    if (t_pcl <= Nanos{0}) {
        throw ConfigError("t_pcl", "must be positive");
    }
    if (!(e_f_local_ppm >= 0.0) || e_f_local_ppm > 1e6) {
        throw ConfigError("e_f_local_ppm", "must be a nonnegative tolerance");
    }
    if (fup_records_max < 1 || fup_records_max > wire::kMaxRecords) {
        throw ConfigError("fup_records_max", "must lie in [1, 255]");
    }
    if (sync_list_capacity < 1) {
        throw ConfigError("sync_list_capacity", "must be positive");
    }
    if (!(fup_jitter >= 0.0 && fup_jitter < 1.0)) {
        throw ConfigError("fup_jitter", "must lie in [0, 1)");
    }
    if (min_rate_baseline < Nanos{0}) {
        throw ConfigError("min_rate_baseline", "must be >= 0");
    }
    if (feasibility_hold < Nanos{0}) {
        throw ConfigError("feasibility_hold", "must be >= 0");
    }
    if (source_freshness <= Nanos{0}) {
        throw ConfigError("source_freshness", "must be positive");
    }
    if (rejoin_holddown < Nanos{0}) {
        throw ConfigError("rejoin_holddown", "must be >= 0");
    }
}

// SyncList -----------------------------------------------------------------------

SyncList::SyncList(std::size_t capacity) : capacity_(capacity)
{
    if (capacity_ == 0) {
        throw ConfigError("sync_list_capacity", "must be positive");
    }
    entries_.reserve(capacity_ + 1);
}

bool SyncList::insert(const BeaconRecord& record)
{
    const bool duplicate = std::any_of(entries_.begin(), entries_.end(), [&](const BeaconRecord& r) {
        return r.ap == record.ap && r.tsf == record.tsf;
    });
    if (duplicate) {
        return false;
    }
    // upper_bound keeps arrival order among equal timestamps
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), record.t,
                                [](Timestamp t, const BeaconRecord& r) { return t < r.t; });
    entries_.insert(pos, record);
    if (entries_.size() > capacity_) {
        entries_.erase(entries_.begin());
    }
    return true;
}

std::vector<BeaconRecord> SyncList::most_recent(std::size_t n) const
{
    const std::size_t take = std::min(n, entries_.size());
    return {entries_.end() - static_cast<std::ptrdiff_t>(take), entries_.end()};
}

void SyncList::shift(Nanos delta)
{
    for (auto& r : entries_) {
        r.t += delta;
    }
}

// Pairing ------------------------------------------------------------------------

std::vector<Match> pair(std::span<const BeaconRecord> remote, std::span<const BeaconRecord> local)
{
    auto key = [](const BeaconRecord& r) { return std::tie(r.ap, r.tsf); };
    auto by_key = [&](const BeaconRecord* a, const BeaconRecord* b) { return key(*a) < key(*b); };

    std::vector<const BeaconRecord*> rs;
    std::vector<const BeaconRecord*> ls;
    rs.reserve(remote.size());
    ls.reserve(local.size());
    for (const auto& r : remote) {
        rs.push_back(&r);
    }
    for (const auto& l : local) {
        ls.push_back(&l);
    }
    std::sort(rs.begin(), rs.end(), by_key);
    std::sort(ls.begin(), ls.end(), by_key);

    std::vector<Match> out;
    auto ri = rs.begin();
    auto li = ls.begin();
    while (ri != rs.end() && li != ls.end()) {
        if (by_key(*ri, *li)) {
            ++ri;
        }
        else if (by_key(*li, *ri)) {
            ++li;
        }
        else {
            auto rend = std::upper_bound(ri, rs.end(), *ri, by_key);
            auto lend = std::upper_bound(li, ls.end(), *li, by_key);
            for (auto r = ri; r != rend; ++r) {
                for (auto l = li; l != lend; ++l) {
                    out.push_back(Match{**r, **l});
                }
            }
            ri = rend;
            li = lend;
        }
    }
    std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
        return std::tie(a.local.t, a.local.ap, a.local.tsf, a.remote.t) <
               std::tie(b.local.t, b.local.ap, b.local.tsf, b.remote.t);
    });
    return out;
}

// Link error and mean intertime ---------------------------------------------------

ErrorEstimate estimate_link_error(const ClockQualityEntry& entry, double e_f_local_ppm)
{
    if (!entry.mean_intertime) {
        return ErrorEstimate::infinite();
    }
    // ppm carried as integer parts-per-billion so that the product stays exact
    const auto ppb = static_cast<__int128>(std::llround(e_f_local_ppm * 1000.0));
    const __int128 num = ppb * static_cast<__int128>(entry.mean_intertime->count());
    constexpr __int128 den = 2'000'000'000;
    const __int128 half_term = (num >= 0 ? num + den / 2 : num - den / 2) / den;
    if (half_term > std::numeric_limits<std::int64_t>::max()) {
        return ErrorEstimate::infinite();
    }
    return entry.e + ErrorEstimate::from_ns(static_cast<std::int64_t>(half_term));
}

void update_mean_intertime(ClockQualityEntry& entry, Timestamp tau_new, const EngineConfig& cfg)
{
    if (tau_new <= entry.tau) {
        throw ContractViolation("mean intertime update needs tau_new > tau (" + std::to_string(tau_new.count()) +
                                " <= " + std::to_string(entry.tau.count()) + ")");
    }
    const auto gap = static_cast<long double>((tau_new - entry.tau).count());
    if (!entry.mean_intertime) {
        entry.mean_intertime = Nanos(std::llround(static_cast<long double>(cfg.beta) * gap)) + cfg.t0;
    }
    else {
        const long double alpha = cfg.ema_alpha;
        const auto prev = static_cast<long double>(entry.mean_intertime->count());
        entry.mean_intertime = Nanos(std::llround(alpha * gap + (1.0L - alpha) * prev));
    }
    entry.tau = tau_new;
}

// Actions ---------------------------------------------------------------------------

const char* to_string(IgnoreReason reason)
{
    switch (reason) {
    case IgnoreReason::self:
        return "self";
    case IgnoreReason::quality:
        return "quality";
    case IgnoreReason::no_match:
        return "no_match";
    case IgnoreReason::infeasible:
        return "infeasible";
    case IgnoreReason::stale:
        return "stale";
    }
    return "?";
}

std::string describe(const Action& action)
{
    return std::visit(
        Overloaded{
            [](const AdjustOffset& a) { return "offset " + std::to_string(a.offset.count()); },
            [](const AdjustRate& a) {
                std::ostringstream os;
                os.precision(12);
                os << "rate " << a.factor;
                return os.str();
            },
            [](const ParentChanged& a) {
                return "parent " + to_string(a.old_parent) + " -> " + to_string(a.new_parent);
            },
            [](const QrefChanged& a) { return "qref " + to_string(a.old_q) + " -> " + to_string(a.new_q); },
            [](const Ignored& a) { return std::string("ignored ") + to_string(a.reason); },
        },
        action);
}

// Engine ------------------------------------------------------------------------------

Engine::Engine(NodeId self, NodeRole role, EngineConfig cfg, ErrorEstimate gc_error, Timestamp start,
               std::uint64_t seed)
    : self_(self),
      role_(role),
      cfg_(cfg),
      gc_error_(gc_error),
      sync_list_((cfg.validate(), cfg.sync_list_capacity)),
      q_ref_(role.q_local),
      rng_(seed)
{
    role_.validate();
    if (role_.gc_capable && role_.q_local.identity != self_) {
        throw ConfigError("quality", "local quality identity must be the station's own id");
    }
    if (role_.gc_capable && gc_error_.is_infinite()) {
        throw ConfigError("gc_error_ns", "a grandmaster-capable station needs a finite error");
    }
    next_fup_due_ = start + jittered_period();
    holddown_until_ = start + cfg_.rejoin_holddown;
}

Nanos Engine::jittered_period()
{
    // 53-bit uniform in [0, 1), spelled out so it is identical on every
    // standard library
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double scale = 1.0 + cfg_.fup_jitter * (2.0 * u - 1.0);
    return Nanos(std::llround(static_cast<double>(cfg_.t_fup.count()) * scale));
}

void Engine::on_beacon(const Beacon& beacon, Timestamp local_t)
{
    if (sync_list_.insert(BeaconRecord{beacon.ap, beacon.tsf, local_t})) {
        ++diag_.beacons_logged;
    }
    else {
        ++diag_.duplicate_beacons;
    }
}

ErrorEstimate Engine::estimate_own_error() const
{
    if (acting_gc()) {
        return gc_error_;
    }
    if (parent_) {
        return estimate_link_error(table_.at(*parent_), cfg_.e_f_local_ppm);
    }
    return ErrorEstimate::infinite();
}

std::optional<FupMessage> Engine::build_fup(Timestamp now)
{
    if (role_.kind == StationKind::rfts) {
        throw RoleViolation("reduced-function station " + self_.to_string() + " cannot send follow-ups");
    }
    if (sync_list_.empty()) {
        return std::nullopt;
    }
    FupMessage msg;
    msg.sender = self_;
    msg.seq = parent_ ? table_.at(*parent_).source_seq : seq_++;
    msg.records = sync_list_.most_recent(cfg_.fup_records_max);
    msg.e = estimate_own_error();
    msg.sq = q_ref_;
    if (!msg.sq.is_infinite()) {
        auto [it, fresh] = feasibility_.try_emplace(msg.sq);
        auto& f = it->second;
        if (fresh || msg.seq > f.source_seq) {
            f.source_seq = msg.seq;
            f.min_e = msg.e;
        }
        else if (msg.seq == f.source_seq) {
            f.min_e = std::min(f.min_e, msg.e);
        }
        // an older number (new parent lagging behind) never relaxes the record
        f.last_advertised = now;
    }
    ++diag_.fups_built;
    return msg;
}

bool Engine::admissible(const ClockQuality& q) const
{
    // a source is only worth following if it beats what we could offer alone
    return cfg_.debug_disable_sq_gate || is_better(q, role_.q_local);
}

bool Engine::feasible(const FupMessage& msg) const
{
    if (msg.sq.identity == msg.sender) {
        return true;  // the source itself has no parent to loop through
    }
    const auto it = feasibility_.find(msg.sq);
    if (it == feasibility_.end()) {
        return true;
    }
    const auto& f = it->second;
    return msg.seq > f.source_seq || (msg.seq == f.source_seq && msg.e < f.min_e);
}

void Engine::note_source(const FupMessage& msg, Timestamp now)
{
    if (msg.sq.is_infinite()) {
        return;
    }
    auto& h = heard_[msg.sq];
    if (msg.sq.identity == msg.sender && !h.empty() && msg.seq < h.rbegin()->first) {
        h.clear();  // the source restarted its count
    }
    if (h.empty() || msg.seq > h.rbegin()->first) {
        h.emplace(msg.seq, now);
        if (h.size() > 32) {
            h.erase(h.begin());
        }
    }
}

bool Engine::fresh(const FupMessage& msg, Timestamp now) const
{
    if (msg.sq.identity == msg.sender) {
        return true;
    }
    const auto q = heard_.find(msg.sq);
    if (q == heard_.end()) {
        return true;
    }
    const auto& h = q->second;
    const auto it = h.lower_bound(msg.seq);
    if (it == h.end()) {
        return true;
    }
    if (it == h.begin() && it->first != msg.seq) {
        return false;  // older than anything still tracked
    }
    return now - it->second <= cfg_.source_freshness;
}

FupOutcome Engine::on_fup(const FupMessage& msg, Timestamp arrival_tau)
{
    FupOutcome out;
    if (msg.sender == self_) {
        out.actions.emplace_back(Ignored{IgnoreReason::self});
        return out;
    }
    ++diag_.fups_received;
    note_source(msg, arrival_tau);

    const auto matches = pair(msg.records, sync_list_.entries());
    out.matches = matches.size();
    const bool gate = !cfg_.debug_disable_sq_gate;

    const bool from_parent = parent_ && *parent_ == msg.sender;
    const auto known = table_.find(msg.sender);
    // A neighbour's entry describes its last accepted offer. Once it offers
    // something we turn down, the entry is stale: the neighbour may by now
    // hang below us.
    auto reject = [&](IgnoreReason reason) {
        if (known != table_.end() && !from_parent) {
            table_.erase(known);
        }
        out.actions.emplace_back(Ignored{reason});
        return out;
    };

    if (gate && acting_gc() && !is_better(msg.sq, role_.q_local)) {
        return reject(IgnoreReason::quality);
    }
    if (matches.empty()) {
        if (known != table_.end() && known->second.q != msg.sq) {
            table_.erase(known);
            if (from_parent) {
                out.actions = select_parent();
            }
        }
        out.actions.emplace_back(Ignored{IgnoreReason::no_match});
        return out;
    }
    ++diag_.fups_paired;

    if (gate && arrival_tau < holddown_until_ && msg.sq.identity != msg.sender) {
        // a relayed source may still lead back through our previous incarnation
        if (!from_parent) {
            return reject(IgnoreReason::infeasible);
        }
        table_.erase(msg.sender);
        auto actions = select_parent();
        out.actions.insert(out.actions.end(), actions.begin(), actions.end());
        return out;
    }
    if (gate && !from_parent) {
        const auto order = compare_clock_quality(msg.sq, q_ref_);
        const bool acceptable = !msg.sq.is_infinite() &&
                                (order == QualityOrder::better ||
                                 (cfg_.accept_equal_quality && order == QualityOrder::equal));
        if (!acceptable) {
            return reject(IgnoreReason::quality);
        }
        if (!feasible(msg)) {
            return reject(IgnoreReason::infeasible);
        }
        if (!fresh(msg, arrival_tau)) {
            return reject(IgnoreReason::stale);
        }
    }

    const bool parent_moved = from_parent && table_.at(msg.sender).q != msg.sq;
    if (!admissible(msg.sq) || (gate && parent_moved && !feasible(msg))) {
        // Only reachable for the current parent: it fell back to a quality
        // we could provide ourselves, or moved to one that may lead back
        // through us, so it stops being a reference.
        table_.erase(msg.sender);
        auto actions = select_parent();
        out.actions.insert(out.actions.end(), actions.begin(), actions.end());
        return out;
    }

    if (auto it = table_.find(msg.sender); it == table_.end()) {
        table_.emplace(msg.sender,
                       ClockQualityEntry{msg.sender, msg.e, arrival_tau, std::nullopt, msg.sq, msg.seq, arrival_tau});
    }
    else {
        auto& entry = it->second;
        if (arrival_tau > entry.tau) {
            update_mean_intertime(entry, arrival_tau, cfg_);
        }
        if (msg.sq != entry.q || msg.seq > entry.source_seq) {
            entry.source_seq = msg.seq;
            entry.seq_since = arrival_tau;
        }
        entry.e = msg.e;
        entry.q = msg.sq;
    }

    auto actions = select_parent();
    out.actions.insert(out.actions.end(), actions.begin(), actions.end());

    if (parent_ && *parent_ == msg.sender) {
        const Match& latest = matches.back();
        const SyncSample sample{latest.local.t, latest.remote.t};
        const Nanos o = cda_offset(sample);
        out.actions.emplace_back(AdjustOffset{o});
        if (cfg_.rate_correction && last_sample_ &&
            sample.local_t - last_sample_->local_t >= std::max(cfg_.min_rate_baseline, Nanos{1})) {
            out.actions.emplace_back(AdjustRate{cda_rate(*last_sample_, sample)});
            last_sample_ = sample;
        }
        else if (!last_sample_ || sample.local_t <= last_sample_->local_t) {
            last_sample_ = sample;
        }
        // otherwise keep the older sample so the baseline can grow
        shift_time_base(-o);
    }
    return out;
}

std::vector<Action> Engine::select_parent()
{
    std::vector<Action> actions;
    const auto old_parent = parent_;
    const auto old_q = q_ref_;

    if (table_.empty()) {
        parent_.reset();
        q_ref_ = role_.q_local;
    }
    else {
        const ClockQualityEntry* best = nullptr;
        ErrorEstimate best_err;
        for (const auto& [id, entry] : table_) {
            const auto err = estimate_link_error(entry, cfg_.e_f_local_ppm);
            if (!best || std::tie(entry.q, err, entry.master) < std::tie(best->q, best_err, best->master)) {
                best = &entry;
                best_err = err;
            }
        }

        const auto current = parent_ ? table_.find(*parent_) : table_.end();
        bool switch_parent = false;
        if (current == table_.end()) {
            switch_parent = true;
        }
        else if (best->master != current->first) {
            const auto& cur = current->second;
            const auto order = compare_clock_quality(best->q, cur.q);
            if (order == QualityOrder::better) {
                switch_parent = true;
            }
            else if (order == QualityOrder::equal) {
                switch_parent = hysteresis_allows(best_err, estimate_link_error(cur, cfg_.e_f_local_ppm),
                                                  cfg_.hysteresis_alpha);
            }
        }
        if (switch_parent) {
            parent_ = best->master;
        }
        q_ref_ = table_.at(*parent_).q;
    }

    if (parent_ != old_parent) {
        last_sample_.reset();
        actions.emplace_back(ParentChanged{old_parent, parent_});
    }
    if (q_ref_ != old_q) {
        actions.emplace_back(QrefChanged{old_q, q_ref_});
    }
    return actions;
}

std::vector<Action> Engine::expire_entries(Timestamp now)
{
    bool removed = false;
    for (auto it = table_.begin(); it != table_.end();) {
        // a relay that keeps repeating an old sequence number has lost its source
        if (now - it->second.tau > cfg_.t_pcl || now - it->second.seq_since > cfg_.t_pcl) {
            it = table_.erase(it);
            removed = true;
        }
        else {
            ++it;
        }
    }
    for (auto it = feasibility_.begin(); it != feasibility_.end();) {
        if (it->first != q_ref_ && now - it->second.last_advertised > cfg_.feasibility_hold) {
            it = feasibility_.erase(it);
        }
        else {
            ++it;
        }
    }
    for (auto it = heard_.begin(); it != heard_.end();) {
        if (now - it->second.rbegin()->second > cfg_.feasibility_hold) {
            it = heard_.erase(it);
        }
        else {
            ++it;
        }
    }
    return removed ? select_parent() : std::vector<Action>{};
}

TickOutcome Engine::tick(Timestamp now)
{
    TickOutcome out;
    out.actions = expire_entries(now);
    if (role_.kind == StationKind::ffts && now >= next_fup_due_) {
        out.fup = build_fup(now);
        do {
            next_fup_due_ += jittered_period();
        } while (next_fup_due_ <= now);
    }
    return out;
}

void Engine::shift_time_base(Nanos delta)
{
    if (delta == Nanos{0}) {
        return;
    }
    sync_list_.shift(delta);
    for (auto& [id, entry] : table_) {
        entry.tau += delta;
        entry.seq_since += delta;
    }
    if (last_sample_) {
        last_sample_->local_t += delta;
    }
    for (auto& [q, f] : feasibility_) {
        f.last_advertised += delta;
    }
    for (auto& [q, h] : heard_) {
        for (auto& [n, t] : h) {
            t += delta;
        }
    }
    next_fup_due_ += delta;
    holddown_until_ += delta;
}

std::vector<std::string> Engine::invariant_violations() const
{
    std::vector<std::string> out;
    if (role_.kind == StationKind::rfts && (role_.gc_capable || !role_.q_local.is_infinite())) {
        out.emplace_back("reduced-function station with grandmaster attributes");
    }
    if (acting_gc() && q_ref_ != role_.q_local) {
        out.emplace_back("acting grandmaster with q_ref != q_local");
    }
    if (parent_) {
        auto it = table_.find(*parent_);
        if (it == table_.end()) {
            out.emplace_back("parent " + parent_->to_string() + " missing from the parent table");
        }
        else if (it->second.q != q_ref_) {
            out.emplace_back("q_ref differs from the parent entry quality");
        }
        if (*parent_ == self_) {
            out.emplace_back("station is its own parent");
        }
    }
    else if (q_ref_ != role_.q_local) {
        out.emplace_back("parentless station with q_ref != q_local");
    }
    if (!cfg_.debug_disable_sq_gate) {
        for (const auto& [id, entry] : table_) {
            if (!is_better(entry.q, role_.q_local)) {
                out.emplace_back("entry " + id.to_string() + " does not beat the local quality");
            }
        }
    }
    return out;
}

}  // namespace domino
