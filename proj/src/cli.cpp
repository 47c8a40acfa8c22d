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

#include <domino/cli.hpp>

#include <domino/analysis.hpp>
#include <domino/scenario.hpp>
#include <domino/simnet.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

namespace domino {

namespace {

namespace fs = std::filesystem;

fs::path output_dir(const RunManifest& m)
{
    if (m.out_dir) {
        return *m.out_dir;
    }
    if (const char* env = std::getenv(kOutDirEnv); env && *env) {
        return env;
    }
    return "domino-out";
}

Scenario prepare(const RunManifest& m)
{
    Scenario sc = load_scenario(m.scenario);
    if (m.seed) {
        sc.seed = *m.seed;
    }
    if (m.duration_s) {
        if (!(*m.duration_s > 0.0) || *m.duration_s > 9.0e9) {
            throw ConfigError("duration", "must be a positive number of seconds");
        }
        sc.duration = Nanos(std::llround(*m.duration_s * 1e9));
    }
    if (m.debug_disable_sq_gate) {
        for (auto& sta : sc.topology.stas) {
            sta.engine.debug_disable_sq_gate = true;
        }
    }
    sc.validate();
    return sc;
}

/// Existing paths among `names` inside `dir`.
std::vector<fs::path> existing(const fs::path& dir, const std::vector<std::string>& names)
{
    std::vector<fs::path> out;
    for (const auto& n : names) {
        if (fs::exists(dir / n)) {
            out.push_back(dir / n);
        }
    }
    return out;
}

void report_violations(const Trace& trace, const RunSummary& s, std::ostream& err)
{
    err << "protocol violation: " << s.cycle_snapshots << " snapshot(s) with parent cycles, "
        << s.invariant_violations << " invariant breach(es)\n";
    for (const auto& snap : trace.snapshots) {
        const auto tree = snapshot_tree(trace, snap);
        if (tree.cycles.empty()) {
            continue;
        }
        err << "first cycle at " << format_seconds(snap.time) << " s:";
        for (const auto& n : tree.cycles.front()) {
            err << ' ' << n.to_string();
        }
        err << '\n';
        break;
    }
    std::size_t shown = 0;
    for (const auto& r : trace.records) {
        if (r.kind == TraceKind::violation && shown++ < 5) {
            err << "invariant at " << format_seconds(r.time) << " s on " << r.node.to_string() << ": " << r.detail
                << '\n';
        }
    }
}

std::string sanitize(const std::string& s)
{
    std::string out;
    for (char c : s) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
    }
    return out;
}

}  // namespace

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    Scenario sc;
    try {
        sc = prepare(m);
    }
    catch (const ConfigError& e) {
        err << m.scenario.string() << ": " << e.what() << '\n';
        return kExitInput;
    }
    const fs::path dir = output_dir(m);
    const std::vector<std::string> names(std::begin(kOutputFiles), std::end(kOutputFiles));
    if (auto clash = existing(dir, names); !clash.empty() && !m.force) {
        err << clash.front().string() << ": already exists (use --force to overwrite)\n";
        return kExitInput;
    }
    try {
        fs::create_directories(dir);
        const Trace trace = simulate(sc);
        const RunSummary s = export_all(trace, dir);
        const auto root = s.final_tree.root();
        out << "wrote " << dir.string() << ": settled " << (s.settled ? format_seconds(*s.settled) + " s" : "never")
            << ", root " << (root ? root->to_string() : "none") << ", mean |error| " << std::llround(s.mean_abs_error_ns)
            << " ns, max |error| " << std::llround(s.max_abs_error_ns) << " ns\n";
        if (s.protocol_violation()) {
            report_violations(trace, s, err);
            return kExitViolation;
        }
    }
    catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitInput;
    }
    catch (const fs::filesystem_error& e) {
        err << e.what() << '\n';
        return kExitInput;
    }
    catch (const std::runtime_error& e) {
        err << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}

int cmd_sweep(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    if (!m.sweep) {
        err << "sweep: --param and --values are required\n";
        return kExitInput;
    }
    const auto& spec = *m.sweep;
    if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters), spec.param) ==
        std::end(kSweepParameters)) {
        err << "param: unknown sweep parameter '" << spec.param << "'\n";
        return kExitInput;
    }
    if (spec.values.empty()) {
        err << "values: at least one value is required\n";
        return kExitInput;
    }
    Scenario base;
    std::vector<Scenario> runs;
    try {
        base = prepare(m);
        for (const auto& v : spec.values) {
            Scenario sc = base;
            apply_parameter(sc, spec.param, v);
            sc.validate();
            runs.push_back(std::move(sc));
        }
    }
    catch (const ConfigError& e) {
        err << m.scenario.string() << ": " << e.what() << '\n';
        return kExitInput;
    }

    const fs::path dir = output_dir(m);
    std::vector<std::string> names{"sweep.csv"};
    for (const auto& v : spec.values) {
        names.push_back(spec.param + "-" + sanitize(v));
    }
    if (auto clash = existing(dir, names); !clash.empty() && !m.force) {
        err << clash.front().string() << ": already exists (use --force to overwrite)\n";
        return kExitInput;
    }

    std::vector<std::optional<RunSummary>> results(runs.size());
    std::vector<std::string> failures(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            try {
                const fs::path sub = dir / names[i + 1];
                fs::create_directories(sub);
                results[i] = export_all(simulate(runs[i]), sub);
            }
            catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(m.jobs, static_cast<unsigned>(runs.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& f : failures) {
        if (!f.empty()) {
            err << f << '\n';
            return kExitInput;
        }
    }

    std::ofstream csv(dir / "sweep.csv", std::ios::binary | std::ios::trunc);
    if (!csv) {
        err << (dir / "sweep.csv").string() << ": cannot open for writing\n";
        return kExitInput;
    }
    csv << "param,value,settled_s,mean_abs_error_ns,max_abs_error_ns,pairing_success,cycle_snapshots,"
           "invariant_violations,converged_nodes\n";
    bool violation = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& s = *results[i];
        const auto converged = std::count_if(s.nodes.begin(), s.nodes.end(),
                                             [](const NodeSummary& n) { return n.convergence.has_value(); });
        char nums[160];
        std::snprintf(nums, sizeof nums, "%.1f,%.1f,%.6f", s.mean_abs_error_ns, s.max_abs_error_ns,
                      s.pairing_success);
        csv << spec.param << ',' << spec.values[i] << ',' << (s.settled ? format_seconds(*s.settled) : "never") << ','
            << nums << ',' << s.cycle_snapshots << ',' << s.invariant_violations << ',' << converged << '\n';
        violation = violation || s.protocol_violation();
    }
    csv.flush();
    if (!csv) {
        err << (dir / "sweep.csv").string() << ": write failed\n";
        return kExitInput;
    }
    out << "wrote " << runs.size() << " runs to " << dir.string() << '\n';
    if (violation) {
        err << "protocol violation in at least one run; see sweep.csv\n";
        return kExitViolation;
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-hop Wi-Fi clock synchronization simulator", "domino"};
    app.require_subcommand(1);

    RunManifest m;
    std::uint64_t seed = 0;
    double duration = 0.0;
    std::string out_dir;
    SweepSpec sweep;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", m.scenario, "Scenario file (YAML)")->required();
        cmd->add_option("--seed", seed, "Override the scenario seed");
        cmd->add_option("--duration", duration, "Override the simulated duration in seconds");
        cmd->add_option("--out", out_dir, "Output directory (default: $DOMINO_OUT_DIR or ./domino-out)");
        cmd->add_flag("--force", m.force, "Overwrite existing outputs");
        cmd->add_flag("--debug-disable-sq-gate", m.debug_disable_sq_gate,
                      "Test only: disable source-quality and feasibility checks");
    };
    auto* run = app.add_subcommand("run", "Simulate one scenario and write CSV outputs");
    common(run);
    auto* sw = app.add_subcommand("sweep", "Run one scenario per parameter value");
    common(sw);
    sw->add_option("--param", sweep.param, "wireless_loss_prob | fup_records_max | t_fup | freq_error_ppm")
        ->required();
    sw->add_option("--values", sweep.values, "Comma-separated values")->delimiter(',')->required();
    sw->add_option("--jobs", m.jobs, "Concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }
    for (auto* cmd : {run, sw}) {
        if (cmd->parsed()) {
            if (cmd->count("--seed")) {
                m.seed = seed;
            }
            if (cmd->count("--duration")) {
                m.duration_s = duration;
            }
            if (cmd->count("--out")) {
                m.out_dir = out_dir;
            }
        }
    }
    if (sw->parsed()) {
        m.sweep = sweep;
        return cmd_sweep(m, out, err);
    }
    return cmd_run(m, out, err);
}

}  // namespace domino
