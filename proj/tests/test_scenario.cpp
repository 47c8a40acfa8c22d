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

#include <domino/scenario.hpp>

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace domino;
using namespace std::chrono_literals;

namespace {

const std::string kMinimal = R"(duration: 30
seed: 5
aps:
  - {id: "0a:00:00:00:00:01", tsf_start: 1000, phase: 0.002}
stas:
  - id: "020000000001"
    gc_capable: true
    quality: {priority1: 3, clock_class: 6, accuracy: 32, variance: 100, priority2: 0}
    gc_error_ns: 100
    hears: ["0a0000000001"]
    ap: "0a0000000001"
  - id: "020000000002"
    kind: rfts
    freq_error_ppm: -12.5
    initial_offset: 0.004
    hears: ["0a0000000001"]
    ap: "0a0000000001"
    engine: {t_fup: 1}
)";

ConfigError error_of(const std::string& text)
{
    try {
        parse_scenario(text);
    }
    catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError");
    return ConfigError("", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal scenario")
{
    const auto sc = parse_scenario(kMinimal);
    CHECK(sc.duration == 30s);
    CHECK(sc.seed == 5);
    REQUIRE(sc.topology.aps.size() == 1);
    CHECK(sc.topology.aps[0].id == NodeId::from_u64(0x0a0000000001ULL));
    CHECK(sc.topology.aps[0].tsf_start.value == 1000);
    CHECK(sc.topology.aps[0].beacon_phase == 2ms);
    CHECK(sc.topology.aps[0].beacon_period == 102'400us);

    REQUIRE(sc.topology.stas.size() == 2);
    const auto& g = sc.topology.stas[0];
    CHECK(g.role.gc_capable);
    CHECK(g.role.q_local.priority1 == 3);
    CHECK(g.role.q_local.identity == g.id);
    CHECK(g.gc_error.ns() == 100);

    const auto& r = sc.topology.stas[1];
    CHECK(r.role.kind == StationKind::rfts);
    CHECK(r.freq_error_ppm == -12.5);
    CHECK(r.initial_offset == 4ms);
    CHECK(r.engine.t_fup == 1s);
    CHECK(g.engine.t_fup == EngineConfig{}.t_fup);
    CHECK(sc.topology.association.at(r.id) == sc.topology.aps[0].id);
    CHECK(sc.topology.hearability.size() == 2);
}

TEST_CASE("engine defaults, loss and mobility")
{
    const std::string text = kMinimal + R"(engine: {t_fup: 4, fup_records_max: 3, accept_equal_quality: true}
loss: {wireless_loss_prob: 0.1, beacon_loss_prob: 0.5, burst: {mean_length: 3, enter_prob: 0.02}}
sim: {tick: 0.005, timestamp_jitter: 0}
mobility:
  - {time: 10, op: node_down, sta: "020000000002"}
  - {time: 20, op: node_up, sta: "020000000002"}
)";
    const auto sc = parse_scenario(text);
    CHECK(sc.topology.stas[0].engine.t_fup == 4s);
    CHECK(sc.topology.stas[0].engine.fup_records_max == 3);
    CHECK(sc.topology.stas[0].engine.accept_equal_quality);
    // per-station override still wins
    CHECK(sc.topology.stas[1].engine.t_fup == 1s);
    CHECK(sc.topology.stas[1].engine.fup_records_max == 3);
    CHECK(sc.loss.wireless_loss_prob == 0.1);
    CHECK(sc.loss.beacon_loss_prob == 0.5);
    CHECK_FALSE(sc.loss.fup_loss_prob);
    REQUIRE(sc.loss.burst);
    CHECK(sc.loss.burst->mean_length == 3.0);
    CHECK(sc.sim.tick == 5ms);
    CHECK(sc.sim.timestamp_jitter == 0ns);
    REQUIRE(sc.mobility.size() == 2);
    CHECK(sc.mobility[1].op == MobilityOp::node_up);
    CHECK(sc.mobility[1].time == 20s);
}

TEST_CASE("explicit hearability with delay")
{
    const std::string text = R"(duration: 5
aps: [{id: "0a0000000001"}]
stas:
  - {id: "020000000002"}
hearability:
  - {ap: "0a0000000001", sta: "020000000002", delay: 0.000002}
association: {"020000000002": "0a0000000001"}
)";
    const auto sc = parse_scenario(text);
    const Link l{NodeId::from_u64(0x0a0000000001ULL), NodeId::from_u64(0x020000000002ULL)};
    CHECK(sc.topology.hearability.count(l) == 1);
    CHECK(sc.topology.propagation_delay.at(l) == 2us);
}

TEST_CASE("errors name the key and the line")
{
    SUBCASE("unknown key")
    {
        auto e = error_of(replace(kMinimal, "    freq_error_ppm: -12.5", "    freq_eror_ppm: -12.5"));
        CHECK(e.key() == "freq_eror_ppm");
        CHECK(e.line() == 14);
    }
    SUBCASE("bad number")
    {
        auto e = error_of(replace(kMinimal, "freq_error_ppm: -12.5", "freq_error_ppm: fast"));
        CHECK(e.key() == "freq_error_ppm");
        CHECK(e.line() == 14);
        CHECK(std::string(e.what()).find("line 14") != std::string::npos);
    }
    SUBCASE("out of range")
    {
        auto e = error_of(replace(kMinimal, "freq_error_ppm: -12.5", "freq_error_ppm: 250"));
        CHECK(e.key() == "freq_error_ppm");
    }
    SUBCASE("bad identifier")
    {
        auto e = error_of(replace(kMinimal, "id: \"020000000002\"", "id: \"02000000002\""));
        CHECK(e.key() == "id");
        CHECK(e.line() == 12);
    }
    SUBCASE("missing duration")
    {
        CHECK(error_of(replace(kMinimal, "duration: 30\n", "")).key() == "duration");
    }
    SUBCASE("unknown ap in association")
    {
        auto e = error_of(replace(kMinimal, "    ap: \"0a0000000001\"\n    engine", "    ap: \"0a0000000009\"\n    engine"));
        CHECK(e.key() == "ap");
    }
    SUBCASE("bad loss probability")
    {
        CHECK(error_of(kMinimal + "loss: {wireless_loss_prob: 1.2}\n").key() == "wireless_loss_prob");
    }
    SUBCASE("mobility breaks association")
    {
        auto e = error_of(kMinimal + "mobility:\n  - {time: 1, op: remove, sta: \"020000000002\", ap: \"0a0000000001\"}\n");
        CHECK(e.key() == "mobility[0]");
        CHECK(e.line() == 20);
    }
    SUBCASE("bad mobility op")
    {
        auto e = error_of(kMinimal + "mobility:\n  - {time: 1, op: teleport, sta: \"020000000002\"}\n");
        CHECK(e.key() == "op");
    }
    SUBCASE("yaml syntax")
    {
        auto e = error_of("duration: [1, 2\n");
        CHECK(e.key() == "syntax");
        CHECK(e.line() > 0);
    }
}

TEST_CASE("load_scenario reports missing files")
{
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.yaml"), ConfigError);
}

TEST_CASE("bundled scenarios parse")
{
    int n = 0;
    for (const auto& f : std::filesystem::directory_iterator(DOMINO_SCENARIO_DIR)) {
        if (f.path().extension() == ".yaml") {
            CAPTURE(f.path().string());
            CHECK_NOTHROW(load_scenario(f.path()).validate());
            ++n;
        }
    }
    CHECK(n >= 1);
}

TEST_CASE("sweep parameters")
{
    auto sc = parse_scenario(kMinimal);
    apply_parameter(sc, "wireless_loss_prob", "0.25");
    CHECK(sc.loss.wireless_loss_prob == 0.25);
    apply_parameter(sc, "fup_records_max", "4");
    CHECK(sc.topology.stas[0].engine.fup_records_max == 4);
    CHECK(sc.topology.stas[1].engine.fup_records_max == 4);
    apply_parameter(sc, "t_fup", "0.5");
    CHECK(sc.topology.stas[1].engine.t_fup == 500ms);
    apply_parameter(sc, "freq_error_ppm", "-20");
    CHECK(sc.topology.stas[0].freq_error_ppm == -20.0);
    CHECK(sc.topology.stas[1].freq_error_ppm == -20.0);

    auto key = [&](std::string_view name, std::string_view v) {
        try {
            apply_parameter(sc, name, v);
        }
        catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("none");
    };
    CHECK(key("wireless_loss_prob", "2") == "wireless_loss_prob");
    CHECK(key("fup_records_max", "0") == "fup_records_max");
    CHECK(key("fup_records_max", "2.5") == "fup_records_max");
    CHECK(key("t_fup", "-1") == "t_fup");
    CHECK(key("freq_error_ppm", "101") == "freq_error_ppm");
    CHECK(key("gravity", "1") == "param");
}
