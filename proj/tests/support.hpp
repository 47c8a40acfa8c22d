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

// Small scenario builders shared by the unit and acceptance tests.

#ifndef DOMINO_TESTS_SUPPORT_HPP
#define DOMINO_TESTS_SUPPORT_HPP

#include <domino/simnet.hpp>

#include <initializer_list>

namespace domino::testing {

inline NodeId ap_id(std::uint64_t n)
{
    return NodeId::from_u64(0x0a0000000000ULL + n);
}

inline NodeId sta_id(std::uint64_t n)
{
    return NodeId::from_u64(0x020000000000ULL + n);
}

inline ClockQuality quality(std::uint8_t p1, const NodeId& id)
{
    return ClockQuality{p1, 6, 32, 100, 0, id};
}

inline ApSpec& add_ap(Scenario& sc, std::uint64_t n, Nanos phase = Nanos{0})
{
    ApSpec ap;
    ap.id = ap_id(n);
    ap.tsf_start = Tsf{n * 1'000'000};
    ap.beacon_phase = phase;
    sc.topology.aps.push_back(ap);
    return sc.topology.aps.back();
}

/// Adds a station hearing `hears` and associated to the first of them.
inline StaSpec& add_sta(Scenario& sc, std::uint64_t n, NodeRole role, std::initializer_list<std::uint64_t> hears,
                        double ppm = 0.0)
{
    StaSpec s;
    s.id = sta_id(n);
    s.role = role;
    if (role.gc_capable) {
        s.role.q_local.identity = s.id;
        s.gc_error = ErrorEstimate::from_ns(100);
    }
    s.freq_error_ppm = ppm;
    s.engine.t_fup = std::chrono::seconds(2);
    for (auto a : hears) {
        sc.topology.hearability.insert({ap_id(a), s.id});
    }
    if (hears.size() != 0) {
        sc.topology.association[s.id] = ap_id(*hears.begin());
    }
    sc.topology.stas.push_back(s);
    return sc.topology.stas.back();
}

inline NodeRole gm(std::uint8_t p1)
{
    return NodeRole::grandmaster(quality(p1, NodeId{}));
}

}  // namespace domino::testing

#endif  // DOMINO_TESTS_SUPPORT_HPP
