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

// Acceptance runner. `domino_acceptance` runs every criterion,
// `domino_acceptance N` runs criterion N only. One line per criterion;
// exit status 1 when any of them fails.

#include "support.hpp"

#include <domino/analysis.hpp>
#include <domino/cli.hpp>
#include <domino/engine.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace domino;
using namespace domino::testing;
using namespace std::chrono_literals;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1 --------------------------------------------------------------------------------

Outcome formula_fidelity()
{
    Outcome o;
    ClockQualityEntry e;
    e.e = ErrorEstimate::from_ns(0);
    e.mean_intertime = 2s;
    o.expect(estimate_link_error(e, 10.0).ns() == 10'000, "link error e=0 10ppm 2s");
    e.e = ErrorEstimate::from_ns(5'000);
    e.mean_intertime = 4s;
    o.expect(estimate_link_error(e, 20.0).ns() == 45'000, "link error e=5us 20ppm 4s");
    e.mean_intertime.reset();
    o.expect(estimate_link_error(e, 10.0).is_infinite(), "undefined intertime");

    EngineConfig cfg;
    cfg.beta = 2.0;
    cfg.t0 = 1s;
    cfg.ema_alpha = 0.125;
    ClockQualityEntry m;
    m.tau = 0s;
    update_mean_intertime(m, 2s, cfg);
    o.expect(m.mean_intertime == 5s, "first estimate 5 s");
    m.mean_intertime = 2s;
    update_mean_intertime(m, 4s, cfg);
    o.expect(m.mean_intertime == 2s, "EMA fixed point");
    update_mean_intertime(m, 8s, cfg);
    o.expect(m.mean_intertime == 2'250'000'000ns, "EMA 2.25 s");

    // own error of a grandmaster and of a direct slave
    Engine gm(sta_id(1), NodeRole::grandmaster(quality(1, sta_id(1))), cfg, ErrorEstimate::from_ns(100), 0ns, 1);
    o.expect(gm.estimate_own_error().ns() == 100, "grandmaster own error");
    if (o.pass) {
        o.detail = "7 hand-computed values exact";
    }
    return o;
}

// 2 --------------------------------------------------------------------------------

Outcome pairing_oracle()
{
    Outcome o;
    std::mt19937_64 rng(77);
    const NodeId aps[] = {ap_id(1), ap_id(2), ap_id(3), ap_id(4)};
    auto draw = [&](std::size_t n) {
        std::vector<BeaconRecord> v;
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(BeaconRecord{aps[rng() % 4], Tsf{rng() % 16}, Nanos(static_cast<std::int64_t>(rng() % 100))});
        }
        return v;
    };
    auto key = [](const Match& m) {
        return std::make_tuple(m.local.t, m.local.ap, m.local.tsf, m.remote.t, m.remote.ap, m.remote.tsf);
    };
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto remote = draw(rng() % 33);
        const auto local = draw(rng() % 33);
        std::vector<Match> oracle;
        for (const auto& r : remote) {
            for (const auto& l : local) {
                if (r.ap == l.ap && r.tsf == l.tsf) {
                    oracle.push_back({r, l});
                }
            }
        }
        auto got = pair(remote, local);
        auto cmp = [&](const Match& a, const Match& b) { return key(a) < key(b); };
        std::sort(oracle.begin(), oracle.end(), cmp);
        std::sort(got.begin(), got.end(), cmp);
        mismatches += got != oracle;
    }
    o.expect(mismatches == 0, std::to_string(mismatches) + " of 1000 instances differ");
    o.detail = o.pass ? "1000 instances identical" : o.detail;
    return o;
}

// 3 --------------------------------------------------------------------------------

Scenario sample_network()
{
    Scenario sc;
    sc.duration = 300s;
    sc.seed = 2;
    for (std::uint64_t a = 1; a <= 7; ++a) {
        add_ap(sc, a, Nanos(static_cast<std::int64_t>(a) * 13'100'000));
    }
    // masters M1..M6 are 1..6, slaves S1..S4 are 11..14
    add_sta(sc, 1, gm(1), {1, 2, 3}, 2.0);
    add_sta(sc, 2, NodeRole::boundary(), {3, 4, 5}, -6.0);
    add_sta(sc, 3, NodeRole::boundary(), {5, 6}, 9.0);
    add_sta(sc, 4, NodeRole::boundary(), {5, 7}, -3.5);
    add_sta(sc, 5, NodeRole::boundary(), {6}, 11.0);
    add_sta(sc, 6, NodeRole::boundary(), {6, 7}, -8.0);
    add_sta(sc, 11, NodeRole::slave_only(), {1}, 15.0);
    add_sta(sc, 12, NodeRole::slave_only(), {2, 3}, -15.0);
    add_sta(sc, 13, NodeRole::slave_only(), {4}, 7.0);
    add_sta(sc, 14, NodeRole::slave_only(), {7}, -1.0);
    return sc;
}

Outcome sample_topology()
{
    Outcome o;
    const auto t = simulate(sample_network());
    const auto settled = settle_time(t);
    o.expect(settled.has_value(), "never settled");
    if (!settled) {
        return o;
    }
    std::size_t checked = 0;
    for (const auto& snap : t.snapshots) {
        if (snap.time < *settled) {
            continue;
        }
        ++checked;
        const auto tree = snapshot_tree(t, snap);
        if (!tree.single_tree() || tree.root() != sta_id(1)) {
            o.expect(false, "no single tree rooted at M1 at " + format_seconds(snap.time));
            break;
        }
        const auto up = tree.ancestors(sta_id(13));
        if (tree.parent_of(sta_id(13)) == sta_id(1) || std::find(up.begin(), up.end(), sta_id(2)) == up.end()) {
            o.expect(false, "S3 not behind M2 at " + format_seconds(snap.time));
            break;
        }
    }
    o.expect(checked > 0, "no snapshots after settling");
    if (o.pass) {
        const auto tree = snapshot_tree(t, t.snapshots.back());
        std::string path;
        for (const auto& a : tree.ancestors(sta_id(13))) {
            path += " " + a.to_string();
        }
        o.detail = "settled " + format_seconds(*settled) + " s, S3 path:" + path;
    }
    return o;
}

// 4 --------------------------------------------------------------------------------

Outcome sawtooth()
{
    Outcome o;
    Scenario sc;
    sc.duration = 120s;
    sc.seed = 4;
    add_ap(sc, 1);
    add_sta(sc, 1, gm(1), {1}, 0.0);
    auto& s = add_sta(sc, 2, NodeRole::slave_only(), {1}, 10.0);
    s.engine.rate_correction = false;
    const auto t = simulate(sc);
    const auto settled = settle_time(t).value_or(t.duration);

    double peak = 0.0;
    std::vector<Nanos> corrections;
    for (const auto& r : t.records) {
        if (r.node == sta_id(2) && r.kind == TraceKind::offset && r.time >= settled) {
            corrections.push_back(r.time);
        }
    }
    const auto series = error_series(t, sta_id(2));
    std::size_t rises = 0;
    std::size_t drops = 0;
    std::size_t bad_rises = 0;
    std::size_t bad_drops = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i - 1].time < settled) {
            continue;
        }
        peak = std::max(peak, std::fabs(static_cast<double>(series[i].error_ns)));
        const bool corrected = std::any_of(corrections.begin(), corrections.end(), [&](Nanos c) {
            return c > series[i - 1].time && c <= series[i].time;
        });
        const auto delta = series[i].error_ns - series[i - 1].error_ns;
        if (corrected) {
            ++drops;
            bad_drops += delta >= 0;
        }
        else {
            ++rises;
            bad_rises += delta <= 0;
        }
    }
    o.expect(peak >= 10'000.0 && peak <= 40'000.0, fmt("peak %.0f ns outside [10000, 40000]", peak));
    o.expect(drops >= 10 && bad_drops == 0, fmt("%.0f of %.0f corrections did not reset the error", double(bad_drops), double(drops)));
    o.expect(rises > 0 && bad_rises == 0, fmt("%.0f of %.0f intervals did not grow", double(bad_rises), double(rises)));
    if (o.pass) {
        o.detail = fmt("peak %.0f ns over %.0f corrections", peak, double(drops));
    }
    return o;
}

// 5 --------------------------------------------------------------------------------

Outcome hop_growth()
{
    Outcome o;
    Scenario sc;
    sc.duration = 300s;
    sc.seed = 5;
    sc.sim.timestamp_jitter = 0ns;
    for (std::uint64_t a = 0; a <= 3; ++a) {
        add_ap(sc, 10 + a, Nanos(static_cast<std::int64_t>(a) * 21'000'000));
    }
    add_sta(sc, 1, gm(1), {10});
    add_sta(sc, 2, NodeRole::boundary(), {10, 11}, 10.0);
    add_sta(sc, 3, NodeRole::boundary(), {11, 12}, 10.0);
    add_sta(sc, 4, NodeRole::boundary(), {12, 13}, 10.0);
    add_sta(sc, 5, NodeRole::boundary(), {13}, 10.0);
    for (auto& s : sc.topology.stas) {
        s.engine.rate_correction = false;
    }
    const auto summary = summarize(simulate(sc));
    std::string means;
    double prev = -1.0;
    for (std::size_t hop = 1; hop <= 4; ++hop) {
        const auto& n = summary.nodes[hop];
        means += fmt(" %.0f", n.mean_abs_error_ns);
        o.expect(n.samples > 0, "hop " + std::to_string(hop) + " has no samples");
        o.expect(n.mean_abs_error_ns > prev, "hop " + std::to_string(hop) + " not above the previous hop");
        prev = n.mean_abs_error_ns;
    }
    const auto tree = summary.final_tree;
    o.expect(tree.ancestors(sta_id(5)).size() == 4, "chain did not form");
    o.detail = (o.pass ? "mean |error| by hop (ns):" : o.detail + "; means:") + means;
    return o;
}

// 6 --------------------------------------------------------------------------------

Outcome pairing_under_loss()
{
    Outcome o;
    const double p = 0.5;
    const unsigned k = 8;
    Scenario sc;
    sc.duration = 300s;
    sc.seed = 6;
    sc.loss.beacon_loss_prob = p;
    sc.loss.fup_loss_prob = 0.0;
    add_ap(sc, 1);
    add_sta(sc, 1, gm(1), {1});
    for (std::uint64_t i = 2; i <= 17; ++i) {
        add_sta(sc, i, NodeRole::slave_only(), {1}, 5.0);
    }
    for (auto& s : sc.topology.stas) {
        s.engine.fup_records_max = k;
    }
    const auto t = simulate(sc);
    std::uint64_t rx = 0;
    std::uint64_t paired = 0;
    for (const auto& l : pairing_stats(t)) {
        rx += l.fups_rx;
        paired += l.fups_paired;
    }
    const double measured = rx ? static_cast<double>(paired) / static_cast<double>(rx) : 0.0;
    const double target = 1.0 - std::pow(1.0 - (1.0 - p) * (1.0 - p), k);
    const double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(std::max<std::uint64_t>(rx, 1)));
    o.expect(rx >= 2000, std::to_string(rx) + " follow-ups received, need 2000");
    const double z = (measured - target) / sigma;
    o.expect(std::fabs(z) <= 3.0, fmt("measured %.4f vs %.4f (%.1f sigma)", measured, target, z));
    o.detail += fmt(" [received-record model 1-p^K = %.4f]", 1.0 - std::pow(p, k));
    if (o.pass) {
        o.detail = fmt("measured %.4f vs %.4f", measured, target);
    }
    return o;
}

// 7 --------------------------------------------------------------------------------

Outcome failover()
{
    Outcome o;
    Scenario sc;
    sc.duration = 400s;
    sc.seed = 7;
    add_ap(sc, 1);
    add_ap(sc, 2, 40ms);
    add_sta(sc, 1, gm(1), {1}, 4.0);        // G1
    add_sta(sc, 2, gm(2), {1, 2}, -6.0);    // G2
    add_sta(sc, 3, NodeRole::boundary(), {1}, 12.0);
    add_sta(sc, 4, NodeRole::slave_only(), {2}, -9.0);
    add_sta(sc, 5, NodeRole::slave_only(), {1}, 3.0);
    add_sta(sc, 6, NodeRole::boundary(), {2}, 7.0);
    const Nanos down = 100s;
    const Nanos up = 250s;
    sc.mobility.push_back(MobilityEvent{down, MobilityOp::node_down, sta_id(1), {}, std::nullopt});
    sc.mobility.push_back(MobilityEvent{up, MobilityOp::node_up, sta_id(1), {}, std::nullopt});
    const auto t = simulate(sc);

    const auto q1 = t.nodes[0].q_local;
    const auto q2 = t.nodes[1].q_local;
    auto at = [&](Nanos when) -> const Snapshot& {
        return *std::find_if(t.snapshots.begin(), t.snapshots.end(), [&](const Snapshot& s) { return s.time >= when; });
    };
    auto all_on = [&](const Snapshot& s, const ClockQuality& q) {
        for (const auto& n : s.nodes) {
            if (n.active && n.q_ref != q) {
                return false;
            }
        }
        return true;
    };
    o.expect(all_on(at(down - 1s), q1) && snapshot_tree(t, at(down - 1s)).root() == sta_id(1),
             "not rooted at G1 before removal");

    const Nanos deadline = down + 60s + 3 * t.max_t_fup();
    const auto& after = at(deadline);
    const auto tree2 = snapshot_tree(t, after);
    o.expect(all_on(after, q2), "some node not on Q_L(G2) at " + format_seconds(deadline));
    o.expect(tree2.single_tree() && tree2.root() == sta_id(2), "tree not rooted at G2 at " + format_seconds(deadline));

    std::optional<Nanos> reached;
    for (const auto& s : t.snapshots) {
        if (s.time >= down && !reached && all_on(s, q2) && snapshot_tree(t, s).root() == sta_id(2)) {
            reached = s.time;
        }
    }
    const auto& last = t.snapshots.back();
    const auto tree1 = snapshot_tree(t, last);
    o.expect(all_on(last, q1) && tree1.single_tree() && tree1.root() == sta_id(1), "tree not back at G1 by 400 s");
    if (o.pass) {
        o.detail = "G2 took over " + format_seconds(*reached - down) + " s after removal (deadline " +
                   format_seconds(deadline - down) + " s)";
    }
    return o;
}

// 8 --------------------------------------------------------------------------------

Scenario churn_scenario(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::uint64_t n) { return rng() % n; };
    Scenario sc;
    sc.duration = 150s;
    sc.seed = seed;
    sc.loss.wireless_loss_prob = 0.05 * static_cast<double>(uniform(5));
    for (std::uint64_t a = 1; a <= 4; ++a) {
        add_ap(sc, a, Nanos(static_cast<std::int64_t>(uniform(100'000)) * 1000));
    }
    auto hearing = [&]() {
        std::vector<std::uint64_t> v{1 + uniform(4)};
        if (uniform(2)) {
            const auto b = 1 + uniform(4);
            if (b != v[0]) {
                v.push_back(b);
            }
        }
        return v;
    };
    auto ppm = [&]() { return static_cast<double>(static_cast<std::int64_t>(uniform(81)) - 40); };
    for (std::uint64_t i = 1; i <= 12; ++i) {
        NodeRole role = i <= 2 ? gm(static_cast<std::uint8_t>(i)) : i <= 8 ? NodeRole::boundary() : NodeRole::slave_only();
        const auto h = hearing();
        auto& s = add_sta(sc, i, role, {h[0]}, ppm());
        if (h.size() > 1) {
            sc.topology.hearability.insert({ap_id(h[1]), s.id});
        }
    }

    // replay a local model so every script stays valid
    auto hear = sc.topology.hearability;
    auto assoc = sc.topology.association;
    std::set<NodeId> down;
    Nanos now = 5s;
    while (true) {
        now += Nanos(static_cast<std::int64_t>(1 + uniform(15'000)) * 1'000'000);
        if (now >= 140s) {
            break;
        }
        const NodeId sta = sta_id(1 + uniform(12));
        const NodeId ap = ap_id(1 + uniform(4));
        MobilityEvent ev{now, MobilityOp::add, sta, ap, std::nullopt};
        switch (uniform(5)) {
        case 0:
            if (hear.count({ap, sta})) {
                continue;
            }
            hear.insert({ap, sta});
            break;
        case 1: {
            if (!hear.count({ap, sta})) {
                continue;
            }
            ev.op = MobilityOp::remove;
            if (assoc[sta] == ap) {
                std::optional<NodeId> other;
                for (std::uint64_t a = 1; a <= 4; ++a) {
                    if (ap_id(a) != ap && hear.count({ap_id(a), sta})) {
                        other = ap_id(a);
                    }
                }
                if (!other) {
                    continue;
                }
                ev.reassociate = other;
                assoc[sta] = *other;
            }
            hear.erase({ap, sta});
            break;
        }
        case 2:
            if (!hear.count({ap, sta}) || assoc[sta] == ap) {
                continue;
            }
            ev.op = MobilityOp::associate;
            assoc[sta] = ap;
            break;
        default:
            if (down.count(sta)) {
                ev.op = MobilityOp::node_up;
                down.erase(sta);
            }
            else {
                ev.op = MobilityOp::node_down;
                down.insert(sta);
            }
            ev.ap = NodeId{};
            break;
        }
        sc.mobility.push_back(ev);
    }
    return sc;
}

Outcome churn()
{
    Outcome o;
    std::size_t cycles = 0;
    std::size_t violations = 0;
    std::size_t events = 0;
    std::size_t snapshots = 0;
    int worst = -1;
    for (int i = 0; i < 100; ++i) {
        const auto sc = churn_scenario(1000 + static_cast<std::uint64_t>(i));
        events += sc.mobility.size();
        const auto t = simulate(sc);
        snapshots += t.snapshots.size();
        const auto c = cycle_snapshots(t);
        const auto v = static_cast<std::size_t>(std::count_if(
            t.records.begin(), t.records.end(), [](const TraceRecord& r) { return r.kind == TraceKind::violation; }));
        if ((c || v) && worst < 0) {
            worst = i;
        }
        cycles += c;
        violations += v;
    }
    o.expect(cycles == 0, std::to_string(cycles) + " snapshots with cycles");
    o.expect(violations == 0, std::to_string(violations) + " invariant violations");
    if (worst >= 0) {
        o.detail += " (first in script " + std::to_string(worst) + ")";
    }
    if (o.pass) {
        o.detail = "100 scripts, " + std::to_string(events) + " mobility events, " + std::to_string(snapshots) +
                   " snapshots, no cycles";
    }
    return o;
}

// 9 --------------------------------------------------------------------------------

std::size_t flaps(bool accept_equal)
{
    EngineConfig cfg;
    cfg.fup_jitter = 0.0;
    cfg.accept_equal_quality = accept_equal;
    const auto src = quality(1, sta_id(99));
    Engine s(sta_id(10), NodeRole::boundary(), cfg, ErrorEstimate::infinite(), 0ns, 1);

    std::size_t changes = 0;
    bool adopted = false;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const Nanos t = Nanos(static_cast<std::int64_t>(k) * 1'000'000'000);
        s.on_beacon(Beacon{ap_id(1), Tsf{k}}, t);
        const std::vector<BeaconRecord> rec{BeaconRecord{ap_id(1), Tsf{k}, t}};
        // within the band: 10 us + 1 us against 10 us + 2 us, swapped every round
        const bool swap = k % 2 == 1;
        for (const auto& [sender, extra] :
             {std::pair{sta_id(1), swap ? 2'000 : 1'000}, std::pair{sta_id(2), swap ? 1'000 : 2'000}}) {
            FupMessage m;
            m.sender = sender;
            m.records = rec;
            m.e = ErrorEstimate::from_ns(extra);
            m.sq = src;
            // both masters send once every 2 s, half a second apart
            if (k % 2 == 0) {
                const auto out = s.on_fup(m, t + (sender == sta_id(1) ? 100ms : 600ms));
                for (const auto& a : out.actions) {
                    if (std::holds_alternative<ParentChanged>(a)) {
                        changes += adopted;
                        adopted = true;
                    }
                }
            }
        }
    }
    return adopted ? changes : 1;
}

Outcome hysteresis()
{
    Outcome o;
    const auto strict = flaps(false);
    const auto equal = flaps(true);
    o.expect(strict == 0, std::to_string(strict) + " parent changes in strict mode");
    o.expect(equal == 0, std::to_string(equal) + " parent changes with equal quality accepted");
    if (o.pass) {
        o.detail = "no parent change after adoption in either mode";
    }
    return o;
}

// 10 -------------------------------------------------------------------------------

Outcome determinism()
{
    Outcome o;
    const auto base = fs::temp_directory_path() / "domino-acceptance-10";
    fs::remove_all(base);
    const std::string scenario = std::string(DOMINO_SCENARIO_DIR) + "/two_bss.yaml";
    for (const char* run : {"a", "b"}) {
        RunManifest m;
        m.scenario = scenario;
        m.out_dir = base / run;
        std::ostringstream out;
        std::ostringstream err;
        const int code = cmd_run(m, out, err);
        o.expect(code == kExitOk, std::string("run ") + run + " exited " + std::to_string(code));
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    std::size_t bytes = 0;
    for (const char* f : kOutputFiles) {
        const auto a = slurp(base / "a" / f);
        o.expect(!a.empty() && a == slurp(base / "b" / f), std::string(f) + " differs");
        bytes += a.size();
    }
    if (o.pass) {
        o.detail = "5 files, " + std::to_string(bytes) + " bytes identical";
    }
    return o;
}

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all{
        {1, "formula fidelity", 1.0, formula_fidelity},
        {2, "pairing oracle equivalence", 5.0, pairing_oracle},
        {3, "sample topology tree", 10.0, sample_topology},
        {4, "sawtooth skew bound", 5.0, sawtooth},
        {5, "error growth per hop", 10.0, hop_growth},
        {6, "pairing success under loss", 20.0, pairing_under_loss},
        {7, "grandmaster failover", 15.0, failover},
        {8, "loop freedom under churn", 60.0, churn},
        {9, "hysteresis anti-flapping", 5.0, hysteresis},
        {10, "determinism", 10.0, determinism},
    };
    return all;
}

bool run_one(const Criterion& c)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.body();
    }
    catch (const std::exception& e) {
        o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.expect(secs <= c.budget_s, fmt("took %.2f s, budget %.0f s", secs, c.budget_s));
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " (" << fmt("%.2f s", secs) << "): "
              << o.detail << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc > 2) {
        std::cerr << "usage: domino_acceptance [criterion]\n";
        return 2;
    }
    bool ok = true;
    bool found = false;
    for (const auto& c : criteria()) {
        if (argc == 2 && std::to_string(c.id) != argv[1]) {
            continue;
        }
        found = true;
        ok = run_one(c) && ok;
    }
    if (!found) {
        std::cerr << "unknown criterion " << argv[1] << '\n';
        return 2;
    }
    return ok ? 0 : 1;
}
