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

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace domino {

namespace {

int line_of(const YAML::Node& n)
{
    return n.IsDefined() && n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& what)
{
    throw ConfigError(key, what, line_of(n));
}

void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<std::string_view> allowed)
{
    if (!map.IsMap()) {
        fail(map, where, "expected a mapping");
    }
    for (auto it = map.begin(); it != map.end(); ++it) {
        const std::string key = it->first.Scalar();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(it->first, key, "unknown key in " + where);
        }
    }
}

std::string scalar(const YAML::Node& n, const std::string& key)
{
    if (!n.IsScalar()) {
        fail(n, key, "expected a scalar");
    }
    return n.Scalar();
}

double parse_double(std::string_view text, const YAML::Node& n, const std::string& key)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(n, key, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

double to_double(const YAML::Node& n, const std::string& key)
{
    return parse_double(scalar(n, key), n, key);
}

std::uint64_t to_uint(const YAML::Node& n, const std::string& key, std::uint64_t max)
{
    const std::string text = scalar(n, key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(n, key, "expected a nonnegative integer, got '" + text + "'");
    }
    if (v > max) {
        fail(n, key, "value " + text + " exceeds " + std::to_string(max));
    }
    return v;
}

bool to_bool(const YAML::Node& n, const std::string& key)
{
    const std::string text = scalar(n, key);
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    fail(n, key, "expected true or false, got '" + text + "'");
}

Nanos to_seconds(const YAML::Node& n, const std::string& key)
{
    const double s = to_double(n, key);
    if (std::fabs(s) > 9.0e9) {
        fail(n, key, "duration out of range");
    }
    return Nanos(std::llround(s * 1e9));
}

NodeId to_id(const YAML::Node& n, const std::string& key)
{
    const std::string text = scalar(n, key);
    auto id = NodeId::parse(text);
    if (!id) {
        fail(n, key, "expected 12 hex digits, got '" + text + "'");
    }
    return *id;
}

YAML::Node require(const YAML::Node& map, const std::string& key, const std::string& where)
{
    YAML::Node n = map[key];
    if (!n.IsDefined() || n.IsNull()) {
        fail(map, key, "missing in " + where);
    }
    return n;
}

void parse_engine(const YAML::Node& map, EngineConfig& cfg)
{
    check_keys(map, "engine",
               {"t_fup", "ema_alpha", "beta", "t0", "hysteresis_alpha", "t_pcl", "e_f_local_ppm", "fup_records_max",
                "sync_list_capacity", "fup_jitter", "rate_correction", "min_rate_baseline", "feasibility_hold",
                "source_freshness", "accept_equal_quality", "debug_disable_sq_gate"});
    for (auto it = map.begin(); it != map.end(); ++it) {
        const std::string key = it->first.Scalar();
        const YAML::Node v = it->second;
        if (key == "t_fup") {
            cfg.t_fup = to_seconds(v, key);
        }
        else if (key == "ema_alpha") {
            cfg.ema_alpha = to_double(v, key);
        }
        else if (key == "beta") {
            cfg.beta = to_double(v, key);
        }
        else if (key == "t0") {
            cfg.t0 = to_seconds(v, key);
        }
        else if (key == "hysteresis_alpha") {
            cfg.hysteresis_alpha = to_double(v, key);
        }
        else if (key == "t_pcl") {
            cfg.t_pcl = to_seconds(v, key);
        }
        else if (key == "e_f_local_ppm") {
            cfg.e_f_local_ppm = to_double(v, key);
        }
        else if (key == "fup_records_max") {
            cfg.fup_records_max = to_uint(v, key, 1'000'000);
        }
        else if (key == "sync_list_capacity") {
            cfg.sync_list_capacity = to_uint(v, key, 1'000'000);
        }
        else if (key == "fup_jitter") {
            cfg.fup_jitter = to_double(v, key);
        }
        else if (key == "rate_correction") {
            cfg.rate_correction = to_bool(v, key);
        }
        else if (key == "min_rate_baseline") {
            cfg.min_rate_baseline = to_seconds(v, key);
        }
        else if (key == "feasibility_hold") {
            cfg.feasibility_hold = to_seconds(v, key);
        }
        else if (key == "source_freshness") {
            cfg.source_freshness = to_seconds(v, key);
        }
        else if (key == "accept_equal_quality") {
            cfg.accept_equal_quality = to_bool(v, key);
        }
        else if (key == "debug_disable_sq_gate") {
            cfg.debug_disable_sq_gate = to_bool(v, key);
        }
    }
    try {
        cfg.validate();
    }
    catch (const ConfigError& e) {
        const YAML::Node at = map[e.key()];
        throw ConfigError(e.key(), std::string(e.what()).substr(e.key().size() + 2), line_of(at.IsDefined() ? at : map));
    }
}

ClockQuality parse_quality(const YAML::Node& map, const NodeId& identity)
{
    check_keys(map, "quality", {"priority1", "clock_class", "accuracy", "variance", "priority2"});
    ClockQuality q;
    q.priority1 = static_cast<std::uint8_t>(to_uint(require(map, "priority1", "quality"), "priority1", 0xFF));
    q.clock_class = static_cast<std::uint8_t>(to_uint(require(map, "clock_class", "quality"), "clock_class", 0xFF));
    q.accuracy = static_cast<std::uint8_t>(to_uint(require(map, "accuracy", "quality"), "accuracy", 0xFF));
    q.variance = static_cast<std::uint16_t>(to_uint(require(map, "variance", "quality"), "variance", 0xFFFF));
    q.priority2 = static_cast<std::uint8_t>(to_uint(require(map, "priority2", "quality"), "priority2", 0xFF));
    q.identity = identity;
    return q;
}

class Parser {
  public:
    explicit Parser(const YAML::Node& root) : root_(root) {}

    Scenario parse()
    {
        if (!root_.IsMap()) {
            fail(root_, "scenario", "top level must be a mapping");
        }
        check_keys(root_, "scenario",
                   {"duration", "seed", "sim", "engine", "aps", "stas", "hearability", "association", "loss",
                    "mobility"});
        sc_.duration = to_seconds(require(root_, "duration", "scenario"), "duration");
        if (sc_.duration <= Nanos{0}) {
            fail(root_["duration"], "duration", "must be positive");
        }
        if (root_["seed"]) {
            sc_.seed = to_uint(root_["seed"], "seed", std::numeric_limits<std::uint64_t>::max());
        }
        if (root_["sim"]) {
            parse_sim(root_["sim"]);
        }
        if (root_["engine"]) {
            parse_engine(root_["engine"], defaults_);
        }
        if (root_["aps"]) {
            parse_aps(root_["aps"]);
        }
        if (root_["stas"]) {
            parse_stas(root_["stas"]);
        }
        if (root_["hearability"]) {
            parse_hearability(root_["hearability"]);
        }
        if (root_["association"]) {
            parse_association(root_["association"]);
        }
        if (root_["loss"]) {
            parse_loss(root_["loss"]);
        }
        if (root_["mobility"]) {
            parse_mobility(root_["mobility"]);
        }
        try {
            sc_.validate();
        }
        catch (const ConfigError& e) {
            if (e.line() > 0) {
                throw;
            }
            throw ConfigError(e.key(), std::string(e.what()).substr(e.key().size() + 2), locate(e.key()));
        }
        return std::move(sc_);
    }

  private:
    // Best-effort source line for errors raised after parsing.
    int locate(const std::string& key) const
    {
        if (key.rfind("mobility[", 0) == 0) {
            const auto idx = std::stoul(key.substr(9));
            return line_of(root_["mobility"][idx]);
        }
        for (const char* section : {"association", "hearability", "loss", "sim", "aps", "stas"}) {
            if (key == section && root_[section]) {
                return line_of(root_[section]);
            }
        }
        return line_of(root_);
    }

    void parse_sim(const YAML::Node& map)
    {
        check_keys(map, "sim", {"tick", "snapshot", "backbone_delay", "timestamp_jitter"});
        for (auto it = map.begin(); it != map.end(); ++it) {
            const std::string key = it->first.Scalar();
            const Nanos v = to_seconds(it->second, key);
            if (key == "tick") {
                sc_.sim.tick = v;
            }
            else if (key == "snapshot") {
                sc_.sim.snapshot = v;
            }
            else if (key == "backbone_delay") {
                sc_.sim.backbone_delay = v;
            }
            else {
                sc_.sim.timestamp_jitter = v;
            }
        }
        try {
            sc_.sim.validate();
        }
        catch (const ConfigError& e) {
            throw ConfigError(e.key(), std::string(e.what()).substr(e.key().size() + 2), line_of(map[e.key()]));
        }
    }

    void claim(const NodeId& id, const YAML::Node& at)
    {
        if (!ids_.insert(id).second) {
            fail(at, "id", "duplicate id " + id.to_string());
        }
    }

    void parse_aps(const YAML::Node& seq)
    {
        if (!seq.IsSequence()) {
            fail(seq, "aps", "expected a sequence");
        }
        for (const auto& n : seq) {
            check_keys(n, "aps", {"id", "beacon_period", "tsf_start", "phase"});
            ApSpec ap;
            ap.id = to_id(require(n, "id", "ap"), "id");
            claim(ap.id, n["id"]);
            if (n["beacon_period"]) {
                ap.beacon_period = to_seconds(n["beacon_period"], "beacon_period");
                if (ap.beacon_period <= Nanos{0}) {
                    fail(n["beacon_period"], "beacon_period", "must be positive");
                }
            }
            if (n["tsf_start"]) {
                ap.tsf_start = Tsf{to_uint(n["tsf_start"], "tsf_start", std::numeric_limits<std::uint64_t>::max())};
            }
            if (n["phase"]) {
                ap.beacon_phase = to_seconds(n["phase"], "phase");
                if (ap.beacon_phase < Nanos{0}) {
                    fail(n["phase"], "phase", "must be >= 0");
                }
            }
            sc_.topology.aps.push_back(ap);
        }
    }

    NodeId known_ap(const YAML::Node& n, const std::string& key)
    {
        const NodeId id = to_id(n, key);
        if (!sc_.topology.find_ap(id)) {
            fail(n, key, "unknown ap " + id.to_string());
        }
        return id;
    }

    NodeId known_sta(const YAML::Node& n, const std::string& key)
    {
        const NodeId id = to_id(n, key);
        if (!sc_.topology.find_sta(id)) {
            fail(n, key, "unknown sta " + id.to_string());
        }
        return id;
    }

    void parse_stas(const YAML::Node& seq)
    {
        if (!seq.IsSequence()) {
            fail(seq, "stas", "expected a sequence");
        }
        for (const auto& n : seq) {
            check_keys(n, "stas",
                       {"id", "kind", "gc_capable", "quality", "gc_error_ns", "freq_error_ppm", "initial_offset",
                        "active", "hears", "ap", "engine"});
            StaSpec sta;
            sta.id = to_id(require(n, "id", "sta"), "id");
            claim(sta.id, n["id"]);
            if (n["kind"]) {
                const std::string kind = scalar(n["kind"], "kind");
                if (kind == "ffts") {
                    sta.role.kind = StationKind::ffts;
                }
                else if (kind == "rfts") {
                    sta.role.kind = StationKind::rfts;
                }
                else {
                    fail(n["kind"], "kind", "expected ffts or rfts, got '" + kind + "'");
                }
            }
            if (n["gc_capable"]) {
                sta.role.gc_capable = to_bool(n["gc_capable"], "gc_capable");
            }
            if (n["quality"]) {
                sta.role.q_local = parse_quality(n["quality"], sta.id);
            }
            try {
                sta.role.validate();
            }
            catch (const ConfigError& e) {
                throw ConfigError(e.key(), std::string(e.what()).substr(e.key().size() + 2),
                                  line_of(n[e.key()].IsDefined() ? n[e.key()] : n));
            }
            if (n["gc_error_ns"]) {
                if (!sta.role.gc_capable) {
                    fail(n["gc_error_ns"], "gc_error_ns", "only grandmaster-capable stations carry a grandmaster error");
                }
                sta.gc_error = ErrorEstimate::from_ns(static_cast<std::int64_t>(
                    to_uint(n["gc_error_ns"], "gc_error_ns", std::numeric_limits<std::int64_t>::max() - 1)));
            }
            else if (sta.role.gc_capable) {
                fail(n, "gc_error_ns", "required for grandmaster-capable stations");
            }
            if (n["freq_error_ppm"]) {
                sta.freq_error_ppm = to_double(n["freq_error_ppm"], "freq_error_ppm");
                if (!(std::fabs(sta.freq_error_ppm) <= kMaxFreqErrorPpm)) {
                    fail(n["freq_error_ppm"], "freq_error_ppm", "magnitude exceeds 100 ppm");
                }
            }
            if (n["initial_offset"]) {
                sta.initial_offset = to_seconds(n["initial_offset"], "initial_offset");
            }
            if (n["active"]) {
                sta.active = to_bool(n["active"], "active");
            }
            sta.engine = defaults_;
            if (n["engine"]) {
                parse_engine(n["engine"], sta.engine);
            }
            sc_.topology.stas.push_back(sta);
            if (n["hears"]) {
                const YAML::Node hears = n["hears"];
                if (!hears.IsSequence()) {
                    fail(hears, "hears", "expected a sequence of ap ids");
                }
                for (const auto& h : hears) {
                    sc_.topology.hearability.insert({known_ap(h, "hears"), sta.id});
                }
            }
            if (n["ap"]) {
                sc_.topology.association[sta.id] = known_ap(n["ap"], "ap");
            }
        }
    }

    void parse_hearability(const YAML::Node& seq)
    {
        if (!seq.IsSequence()) {
            fail(seq, "hearability", "expected a sequence");
        }
        for (const auto& n : seq) {
            NodeId ap;
            NodeId sta;
            if (n.IsSequence()) {
                if (n.size() != 2) {
                    fail(n, "hearability", "expected [ap, sta]");
                }
                ap = known_ap(n[0], "ap");
                sta = known_sta(n[1], "sta");
            }
            else {
                check_keys(n, "hearability", {"ap", "sta", "delay"});
                ap = known_ap(require(n, "ap", "hearability"), "ap");
                sta = known_sta(require(n, "sta", "hearability"), "sta");
                if (n["delay"]) {
                    const Nanos d = to_seconds(n["delay"], "delay");
                    if (d < Nanos{0}) {
                        fail(n["delay"], "delay", "must be >= 0");
                    }
                    sc_.topology.propagation_delay[{ap, sta}] = d;
                }
            }
            sc_.topology.hearability.insert({ap, sta});
        }
    }

    void parse_association(const YAML::Node& map)
    {
        if (!map.IsMap()) {
            fail(map, "association", "expected a mapping of sta to ap");
        }
        for (auto it = map.begin(); it != map.end(); ++it) {
            const NodeId sta = known_sta(it->first, "association");
            const NodeId ap = known_ap(it->second, "association");
            if (!sc_.topology.hearability.count({ap, sta})) {
                fail(it->second, "association", "sta " + sta.to_string() + " cannot hear ap " + ap.to_string());
            }
            sc_.topology.association[sta] = ap;
        }
    }

    void parse_loss(const YAML::Node& map)
    {
        check_keys(map, "loss", {"wireless_loss_prob", "beacon_loss_prob", "fup_loss_prob", "burst"});
        auto prob = [&](const char* key) {
            const double p = to_double(map[key], key);
            if (!(p >= 0.0 && p <= 1.0)) {
                fail(map[key], key, "must lie in [0, 1]");
            }
            return p;
        };
        if (map["wireless_loss_prob"]) {
            sc_.loss.wireless_loss_prob = prob("wireless_loss_prob");
        }
        if (map["beacon_loss_prob"]) {
            sc_.loss.beacon_loss_prob = prob("beacon_loss_prob");
        }
        if (map["fup_loss_prob"]) {
            sc_.loss.fup_loss_prob = prob("fup_loss_prob");
        }
        if (map["burst"]) {
            const YAML::Node b = map["burst"];
            check_keys(b, "burst", {"mean_length", "enter_prob"});
            BurstModel burst;
            burst.mean_length = to_double(require(b, "mean_length", "burst"), "mean_length");
            if (!(burst.mean_length >= 1.0)) {
                fail(b["mean_length"], "mean_length", "must be >= 1");
            }
            burst.enter_prob = to_double(require(b, "enter_prob", "burst"), "enter_prob");
            if (!(burst.enter_prob >= 0.0 && burst.enter_prob <= 1.0)) {
                fail(b["enter_prob"], "enter_prob", "must lie in [0, 1]");
            }
            sc_.loss.burst = burst;
        }
    }

    void parse_mobility(const YAML::Node& seq)
    {
        if (!seq.IsSequence()) {
            fail(seq, "mobility", "expected a sequence");
        }
        for (const auto& n : seq) {
            check_keys(n, "mobility", {"time", "op", "sta", "ap", "reassociate"});
            MobilityEvent ev;
            ev.time = to_seconds(require(n, "time", "mobility"), "time");
            if (ev.time < Nanos{0}) {
                fail(n["time"], "time", "must be >= 0");
            }
            const std::string op = scalar(require(n, "op", "mobility"), "op");
            if (op == "add") {
                ev.op = MobilityOp::add;
            }
            else if (op == "remove") {
                ev.op = MobilityOp::remove;
            }
            else if (op == "associate") {
                ev.op = MobilityOp::associate;
            }
            else if (op == "node_down") {
                ev.op = MobilityOp::node_down;
            }
            else if (op == "node_up") {
                ev.op = MobilityOp::node_up;
            }
            else {
                fail(n["op"], "op", "unknown operation '" + op + "'");
            }
            ev.sta = known_sta(require(n, "sta", "mobility"), "sta");
            const bool needs_ap = ev.op == MobilityOp::add || ev.op == MobilityOp::remove || ev.op == MobilityOp::associate;
            if (needs_ap) {
                ev.ap = known_ap(require(n, "ap", "mobility"), "ap");
            }
            else if (n["ap"]) {
                fail(n["ap"], "ap", "not used by " + op);
            }
            if (n["reassociate"]) {
                if (ev.op != MobilityOp::remove) {
                    fail(n["reassociate"], "reassociate", "only valid with remove");
                }
                ev.reassociate = known_ap(n["reassociate"], "reassociate");
            }
            sc_.mobility.push_back(ev);
        }
    }

    const YAML::Node& root_;
    Scenario sc_;
    EngineConfig defaults_;
    std::set<NodeId> ids_;
};

}  // namespace

Scenario parse_scenario(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    }
    catch (const YAML::Exception& e) {
        throw ConfigError("syntax", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
    }
    try {
        return Parser(root).parse();
    }
    catch (const YAML::Exception& e) {
        throw ConfigError("syntax", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
    }
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("scenario", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void apply_parameter(Scenario& sc, std::string_view name, std::string_view value)
{
    const YAML::Node none;
    const std::string key(name);
    if (name == "wireless_loss_prob") {
        const double p = parse_double(value, none, key);
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(key, "must lie in [0, 1]");
        }
        sc.loss.wireless_loss_prob = p;
    }
    else if (name == "fup_records_max") {
        const double k = parse_double(value, none, key);
        if (k != std::floor(k) || k < 1 || k > static_cast<double>(wire::kMaxRecords)) {
            throw ConfigError(key, "must be an integer in [1, 255]");
        }
        for (auto& sta : sc.topology.stas) {
            sta.engine.fup_records_max = static_cast<std::size_t>(k);
        }
    }
    else if (name == "t_fup") {
        const double s = parse_double(value, none, key);
        if (!(s > 0.0)) {
            throw ConfigError(key, "must be positive");
        }
        for (auto& sta : sc.topology.stas) {
            sta.engine.t_fup = Nanos(std::llround(s * 1e9));
        }
    }
    else if (name == "freq_error_ppm") {
        const double ppm = parse_double(value, none, key);
        if (!(std::fabs(ppm) <= kMaxFreqErrorPpm)) {
            throw ConfigError(key, "magnitude exceeds 100 ppm");
        }
        for (auto& sta : sc.topology.stas) {
            sta.freq_error_ppm = ppm;
        }
    }
    else {
        throw ConfigError("param", "unknown sweep parameter '" + key + "'");
    }
}

}  // namespace domino
