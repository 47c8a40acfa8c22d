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

#include <domino/analysis.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace domino {

namespace {

using ParentMap = std::map<NodeId, std::optional<NodeId>>;

// Cycles in the functional graph child -> parent, each listed once starting
// from its smallest member.
std::vector<std::vector<NodeId>> find_cycles(const ParentMap& parents)
{
    enum class Mark { fresh, open, done };
    std::map<NodeId, Mark> mark;
    std::vector<std::vector<NodeId>> cycles;
    for (const auto& [start, p] : parents) {
        if (mark[start] != Mark::fresh) {
            continue;
        }
        std::vector<NodeId> path;
        std::optional<NodeId> cur = start;
        while (cur && parents.count(*cur) && mark[*cur] == Mark::fresh) {
            mark[*cur] = Mark::open;
            path.push_back(*cur);
            cur = parents.at(*cur);
        }
        if (cur && parents.count(*cur) && mark[*cur] == Mark::open) {
            auto begin = std::find(path.begin(), path.end(), *cur);
            std::vector<NodeId> cycle(begin, path.end());
            std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
            cycles.push_back(std::move(cycle));
        }
        for (const auto& n : path) {
            mark[n] = Mark::done;
        }
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

TreeSnapshot build_tree(Nanos time, const std::vector<NodeInfo>& nodes, const ParentMap& parents,
                        const std::set<NodeId>& active, const std::set<NodeId>& acting)
{
    TreeSnapshot tree;
    tree.time = time;
    for (const auto& info : nodes) {
        if (!active.count(info.id)) {
            continue;
        }
        tree.active.push_back(info.id);
        const auto& p = parents.at(info.id);
        if (p) {
            tree.edges.emplace_back(info.id, *p);
        }
        else if (acting.count(info.id)) {
            tree.roots.push_back(info.id);
        }
        else {
            tree.orphans.push_back(info.id);
        }
    }
    ParentMap live;
    for (const auto& [c, p] : tree.edges) {
        live[c] = p;
    }
    tree.cycles = find_cycles(live);
    return tree;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

// Synchronization error -------------------------------------------------------------

std::optional<std::size_t> reference_of(const Snapshot& snap, const Trace& trace, std::size_t node)
{
    if (node >= snap.nodes.size() || !snap.nodes[node].active) {
        return std::nullopt;
    }
    std::size_t cur = node;
    for (std::size_t steps = 0; snap.nodes[cur].parent; ++steps) {
        if (steps > snap.nodes.size()) {
            return std::nullopt;
        }
        auto next = trace.index_of(*snap.nodes[cur].parent);
        if (!next) {
            return std::nullopt;
        }
        cur = *next;
    }
    const auto& root = snap.nodes[cur];
    if (!root.active || !root.acting_gc) {
        return std::nullopt;
    }
    return cur;
}

std::optional<std::int64_t> snapshot_error(const Trace& trace, std::size_t snap_index, std::size_t node)
{
    const auto& snap = trace.snapshots.at(snap_index);
    auto ref = reference_of(snap, trace, node);
    if (!ref) {
        return std::nullopt;
    }
    return (snap.nodes[node].local - snap.nodes[*ref].local).count();
}

std::optional<double> sync_error(const Trace& trace, const NodeId& node, Nanos t)
{
    auto idx = trace.index_of(node);
    if (!idx) {
        throw ContractViolation("unknown node " + node.to_string());
    }
    const auto& snaps = trace.snapshots;
    if (snaps.empty() || t < snaps.front().time || t > snaps.back().time) {
        throw ContractViolation("time " + format_seconds(t) + " s outside the trace span");
    }
    auto after = std::upper_bound(snaps.begin(), snaps.end(), t,
                                  [](Nanos v, const Snapshot& s) { return v < s.time; });
    const auto i = static_cast<std::size_t>(after - snaps.begin()) - 1;
    const auto e0 = snapshot_error(trace, i, *idx);
    if (snaps[i].time == t) {
        return e0 ? std::optional<double>(static_cast<double>(*e0)) : std::nullopt;
    }
    const auto e1 = snapshot_error(trace, i + 1, *idx);
    if (!e0 || !e1) {
        return std::nullopt;
    }
    const double w = static_cast<double>((t - snaps[i].time).count()) /
                     static_cast<double>((snaps[i + 1].time - snaps[i].time).count());
    return static_cast<double>(*e0) + w * static_cast<double>(*e1 - *e0);
}

std::vector<ErrorSample> error_series(const Trace& trace)
{
    std::vector<ErrorSample> out;
    for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
        for (std::size_t n = 0; n < trace.nodes.size(); ++n) {
            if (auto e = snapshot_error(trace, s, n)) {
                out.push_back({trace.snapshots[s].time, trace.nodes[n].id, *e});
            }
        }
    }
    return out;
}

std::vector<ErrorSample> error_series(const Trace& trace, const NodeId& node)
{
    auto idx = trace.index_of(node);
    if (!idx) {
        throw ContractViolation("unknown node " + node.to_string());
    }
    std::vector<ErrorSample> out;
    for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
        if (auto e = snapshot_error(trace, s, *idx)) {
            out.push_back({trace.snapshots[s].time, node, *e});
        }
    }
    return out;
}

// Trees -------------------------------------------------------------------------------

std::optional<NodeId> TreeSnapshot::parent_of(const NodeId& id) const
{
    for (const auto& [c, p] : edges) {
        if (c == id) {
            return p;
        }
    }
    return std::nullopt;
}

std::vector<NodeId> TreeSnapshot::ancestors(const NodeId& id) const
{
    std::vector<NodeId> out;
    auto cur = parent_of(id);
    while (cur && out.size() <= edges.size()) {
        if (std::find(out.begin(), out.end(), *cur) != out.end() || *cur == id) {
            break;
        }
        out.push_back(*cur);
        cur = parent_of(*cur);
    }
    return out;
}

bool TreeSnapshot::single_tree() const
{
    if (!cycles.empty() || roots.size() != 1 || !orphans.empty()) {
        return false;
    }
    for (const auto& n : active) {
        if (n == roots.front()) {
            continue;
        }
        auto up = ancestors(n);
        if (up.empty() || up.back() != roots.front()) {
            return false;
        }
    }
    return true;
}

TreeSnapshot extract_tree(const Trace& trace, Nanos t)
{
    ParentMap parents;
    std::set<NodeId> active;
    for (const auto& n : trace.nodes) {
        parents[n.id] = std::nullopt;
        if (n.initially_active) {
            active.insert(n.id);
        }
    }
    for (const auto& r : trace.records) {
        if (r.time > t) {
            break;
        }
        switch (r.kind) {
        case TraceKind::parent:
            parents[r.node] = r.peer;
            break;
        case TraceKind::node_down:
            active.erase(r.node);
            parents[r.node] = std::nullopt;
            break;
        case TraceKind::node_up:
            active.insert(r.node);
            parents[r.node] = std::nullopt;
            break;
        default:
            break;
        }
    }
    std::set<NodeId> acting;
    for (const auto& n : trace.nodes) {
        if (n.gc_capable && active.count(n.id) && !parents[n.id]) {
            acting.insert(n.id);
        }
    }
    return build_tree(t, trace.nodes, parents, active, acting);
}

TreeSnapshot snapshot_tree(const Trace& trace, const Snapshot& snap)
{
    ParentMap parents;
    std::set<NodeId> active;
    std::set<NodeId> acting;
    for (std::size_t i = 0; i < trace.nodes.size() && i < snap.nodes.size(); ++i) {
        const auto& id = trace.nodes[i].id;
        const auto& s = snap.nodes[i];
        parents[id] = s.parent;
        if (s.active) {
            active.insert(id);
        }
        if (s.acting_gc) {
            acting.insert(id);
        }
    }
    return build_tree(snap.time, trace.nodes, parents, active, acting);
}

std::size_t cycle_snapshots(const Trace& trace)
{
    std::size_t n = 0;
    for (const auto& snap : trace.snapshots) {
        if (!snapshot_tree(trace, snap).cycles.empty()) {
            ++n;
        }
    }
    return n;
}

// Timing ------------------------------------------------------------------------------

std::optional<Nanos> convergence_time(const Trace& trace, const NodeId& node, double threshold_ns)
{
    auto idx = trace.index_of(node);
    if (!idx) {
        throw ContractViolation("unknown node " + node.to_string());
    }
    const auto& snaps = trace.snapshots;
    if (snaps.empty()) {
        return std::nullopt;
    }
    const Nanos window = 3 * trace.max_t_fup();
    const std::size_t n = snaps.size();
    // next_bad[i]: first index >= i whose sample is undefined or too large
    std::vector<std::size_t> next_bad(n + 1, n);
    for (std::size_t i = n; i-- > 0;) {
        const auto e = snapshot_error(trace, i, *idx);
        const bool bad = !e || !(std::fabs(static_cast<double>(*e)) < threshold_ns);
        next_bad[i] = bad ? i : next_bad[i + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Nanos end = snaps[i].time + window;
        if (end > snaps.back().time) {
            break;
        }
        if (next_bad[i] == n || snaps[next_bad[i]].time > end) {
            return snaps[i].time;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<Nanos> change_times(const Trace& trace)
{
    std::vector<Nanos> out;
    for (const auto& r : trace.records) {
        if (r.kind == TraceKind::parent || r.kind == TraceKind::qref) {
            out.push_back(r.time);
        }
    }
    return out;
}

}  // namespace

bool settled_at(const Trace& trace, Nanos t)
{
    const Nanos window = 3 * trace.max_t_fup();
    if (t < window) {
        return false;
    }
    const auto changes = change_times(trace);
    auto it = std::upper_bound(changes.begin(), changes.end(), t);
    return it == changes.begin() || *std::prev(it) <= t - window;
}

std::optional<Nanos> settle_time(const Trace& trace, Nanos from)
{
    const Nanos window = 3 * trace.max_t_fup();
    const auto changes = change_times(trace);
    Nanos t = std::max(from, window);
    while (t <= trace.duration) {
        auto it = std::upper_bound(changes.begin(), changes.end(), t);
        if (it == changes.begin() || *std::prev(it) <= t - window) {
            return t;
        }
        t = *std::prev(it) + window;
    }
    return std::nullopt;
}

// Pairing -----------------------------------------------------------------------------

std::vector<LinkPairing> pairing_stats(const Trace& trace)
{
    std::map<std::pair<NodeId, NodeId>, LinkPairing> links;
    for (const auto& r : trace.records) {
        if (r.kind != TraceKind::fup_rx || !r.peer) {
            continue;
        }
        auto& l = links[{*r.peer, r.node}];
        l.master = *r.peer;
        l.slave = r.node;
        const auto matches = static_cast<std::uint64_t>(r.value);
        ++l.fups_rx;
        if (matches > 0) {
            ++l.fups_paired;
        }
        l.max_matches = std::max(l.max_matches, matches);
        ++l.histogram[matches];
    }
    std::vector<LinkPairing> out;
    out.reserve(links.size());
    for (auto& [key, l] : links) {
        out.push_back(std::move(l));
    }
    return out;
}

// Summary -----------------------------------------------------------------------------

RunSummary summarize(const Trace& trace, double threshold_ns)
{
    RunSummary s;
    s.threshold_ns = threshold_ns;
    s.settled = settle_time(trace);
    s.final_tree = trace.snapshots.empty() ? extract_tree(trace, trace.duration)
                                           : snapshot_tree(trace, trace.snapshots.back());
    s.cycle_snapshots = cycle_snapshots(trace);
    s.invariant_violations = static_cast<std::size_t>(std::count_if(
        trace.records.begin(), trace.records.end(), [](const TraceRecord& r) { return r.kind == TraceKind::violation; }));
    s.counts = trace.counts;

    const Nanos from = s.settled.value_or(Nanos{0});
    double total_abs = 0.0;
    std::size_t total_n = 0;
    for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
        NodeSummary ns;
        ns.id = trace.nodes[i].id;
        ns.convergence = convergence_time(trace, ns.id, threshold_ns);
        ns.final_parent = s.final_tree.parent_of(ns.id);
        for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
            if (trace.snapshots[k].time < from) {
                continue;
            }
            if (auto e = snapshot_error(trace, k, i)) {
                const double a = std::fabs(static_cast<double>(*e));
                ++ns.samples;
                ns.mean_abs_error_ns += a;
                ns.max_abs_error_ns = std::max(ns.max_abs_error_ns, a);
            }
        }
        total_abs += ns.mean_abs_error_ns;
        total_n += ns.samples;
        if (ns.samples > 0) {
            ns.mean_abs_error_ns /= static_cast<double>(ns.samples);
        }
        s.max_abs_error_ns = std::max(s.max_abs_error_ns, ns.max_abs_error_ns);
        s.nodes.push_back(ns);
    }
    s.mean_abs_error_ns = total_n > 0 ? total_abs / static_cast<double>(total_n) : 0.0;

    std::uint64_t rx = 0;
    std::uint64_t paired = 0;
    for (const auto& l : pairing_stats(trace)) {
        rx += l.fups_rx;
        paired += l.fups_paired;
    }
    s.pairing_success = rx > 0 ? static_cast<double>(paired) / static_cast<double>(rx) : 0.0;
    return s;
}

// CSV ---------------------------------------------------------------------------------

std::string format_seconds(Nanos t)
{
    const std::int64_t ns = t.count();
    const std::uint64_t mag = ns < 0 ? 0 - static_cast<std::uint64_t>(ns) : static_cast<std::uint64_t>(ns);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%llu.%09llu", ns < 0 ? "-" : "",
                  static_cast<unsigned long long>(mag / 1'000'000'000ULL),
                  static_cast<unsigned long long>(mag % 1'000'000'000ULL));
    return buf;
}

std::optional<Nanos> parse_seconds(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || frac.size() > 9 || (dot != std::string_view::npos && frac.empty())) {
        return std::nullopt;
    }
    std::int64_t s = 0;
    auto r1 = std::from_chars(whole.data(), whole.data() + whole.size(), s);
    if (r1.ec != std::errc{} || r1.ptr != whole.data() + whole.size()) {
        return std::nullopt;
    }
    std::int64_t f = 0;
    if (!frac.empty()) {
        auto r2 = std::from_chars(frac.data(), frac.data() + frac.size(), f);
        if (r2.ec != std::errc{} || r2.ptr != frac.data() + frac.size()) {
            return std::nullopt;
        }
        for (std::size_t i = frac.size(); i < 9; ++i) {
            f *= 10;
        }
    }
    const std::int64_t ns = s * 1'000'000'000 + f;
    return Nanos(negative ? -ns : ns);
}

void write_errors_csv(const Trace& trace, const std::filesystem::path& path)
{
    auto out = open_out(path);
    out << "true_time_s,node_id,error_ns\n";
    for (const auto& e : error_series(trace)) {
        out << format_seconds(e.time) << ',' << e.node.to_string() << ',' << e.error_ns << '\n';
    }
    finish(out, path);
}

void write_tree_csv(const Trace& trace, const std::filesystem::path& path)
{
    auto out = open_out(path);
    out << "true_time_s,child_id,parent_id\n";
    for (const auto& snap : trace.snapshots) {
        const std::string t = format_seconds(snap.time);
        for (std::size_t i = 0; i < snap.nodes.size(); ++i) {
            if (snap.nodes[i].parent) {
                out << t << ',' << trace.nodes[i].id.to_string() << ',' << snap.nodes[i].parent->to_string() << '\n';
            }
        }
    }
    finish(out, path);
}

void write_events_csv(const Trace& trace, const std::filesystem::path& path)
{
    auto out = open_out(path);
    out << "true_time_s,node_id,kind,detail\n";
    for (const auto& r : trace.records) {
        std::string detail;
        if (r.peer) {
            detail = "peer=" + r.peer->to_string();
        }
        if (r.value != 0 || r.kind == TraceKind::fup_rx) {
            detail += (detail.empty() ? "" : " ") + std::string("value=") + std::to_string(r.value);
        }
        if (!r.detail.empty()) {
            detail += (detail.empty() ? "" : " ") + r.detail;
        }
        out << format_seconds(r.time) << ',' << r.node.to_string() << ',' << to_string(r.kind) << ','
            << csv_field(detail) << '\n';
    }
    finish(out, path);
}

void write_pairing_csv(const Trace& trace, const std::filesystem::path& path)
{
    auto out = open_out(path);
    out << "master_id,slave_id,fups_rx,fups_paired,max_matches\n";
    for (const auto& l : pairing_stats(trace)) {
        out << l.master.to_string() << ',' << l.slave.to_string() << ',' << l.fups_rx << ',' << l.fups_paired << ','
            << l.max_matches << '\n';
    }
    finish(out, path);
}

void write_summary(const RunSummary& s, const std::filesystem::path& path)
{
    auto out = open_out(path);
    const auto& c = s.counts;
    out << "settled_s " << (s.settled ? format_seconds(*s.settled) : "never") << '\n';
    out << "protocol_violation " << (s.protocol_violation() ? "yes" : "no") << '\n';
    out << "cycle_snapshots " << s.cycle_snapshots << '\n';
    out << "invariant_violations " << s.invariant_violations << '\n';
    out << "mean_abs_error_ns " << fixed(s.mean_abs_error_ns, 1) << '\n';
    out << "max_abs_error_ns " << fixed(s.max_abs_error_ns, 1) << '\n';
    out << "pairing_success " << fixed(s.pairing_success, 6) << '\n';
    out << "beacons emitted " << c.beacons_emitted << " attempts " << c.beacon_attempts << " delivered "
        << c.beacons_delivered << " dropped " << c.beacons_dropped << '\n';
    out << "fups emitted " << c.fups_emitted << " uplink_dropped " << c.fups_uplink_dropped << " attempts "
        << c.fup_attempts << " delivered " << c.fups_delivered << " dropped " << c.fups_dropped << '\n';
    const auto root = s.final_tree.root();
    out << "tree root " << (root ? root->to_string() : "none") << " single " << (s.final_tree.single_tree() ? "yes" : "no")
        << '\n';
    for (const auto& [child, parent] : s.final_tree.edges) {
        out << "edge " << child.to_string() << ' ' << parent.to_string() << '\n';
    }
    out << "convergence_threshold_ns " << fixed(s.threshold_ns, 1) << '\n';
    for (const auto& n : s.nodes) {
        out << "node " << n.id.to_string() << " convergence_s "
            << (n.convergence ? format_seconds(*n.convergence) : "unbounded") << " parent "
            << (n.final_parent ? n.final_parent->to_string() : "-") << " samples " << n.samples
            << " mean_abs_error_ns " << fixed(n.mean_abs_error_ns, 1) << " max_abs_error_ns "
            << fixed(n.max_abs_error_ns, 1) << '\n';
    }
    finish(out, path);
}

std::vector<ErrorSample> read_errors_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(path.string() + ": cannot open for reading");
    }
    auto bad = [&](std::size_t line, const std::string& what) {
        return std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
    };
    std::string line;
    if (!std::getline(in, line) || line != "true_time_s,node_id,error_ns") {
        throw bad(1, "unexpected header");
    }
    std::vector<ErrorSample> out;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw bad(n, "expected three fields");
        }
        auto t = parse_seconds(std::string_view(line).substr(0, c1));
        auto id = NodeId::parse(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
        std::int64_t e = 0;
        const std::string_view es = std::string_view(line).substr(c2 + 1);
        auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), e);
        if (!t || !id || ec != std::errc{} || ptr != es.data() + es.size()) {
            throw bad(n, "malformed row");
        }
        out.push_back({*t, *id, e});
    }
    return out;
}

RunSummary export_all(const Trace& trace, const std::filesystem::path& dir, double threshold_ns)
{
    write_errors_csv(trace, dir / "errors.csv");
    write_tree_csv(trace, dir / "tree.csv");
    write_events_csv(trace, dir / "events.csv");
    write_pairing_csv(trace, dir / "pairing.csv");
    auto summary = summarize(trace, threshold_ns);
    write_summary(summary, dir / "summary.txt");
    return summary;
}

}  // namespace domino
