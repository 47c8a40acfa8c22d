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

#include <domino/timebase.hpp>

#include <algorithm>
#include <cmath>

namespace domino {

VirtualClock::VirtualClock(double freq_error_ppm, Nanos initial_offset, double max_freq_error_ppm)
    : freq_error_ppm_(freq_error_ppm), offset_correction_(initial_offset)
{
    if (!(std::fabs(freq_error_ppm) <= max_freq_error_ppm)) {
        throw ContractViolation("frequency error " + std::to_string(freq_error_ppm) +
                                " ppm exceeds the configured bound of " + std::to_string(max_freq_error_ppm) +
                                " ppm");
    }
}

double VirtualClock::raw_at(Timestamp true_time) const
{
    const double elapsed = static_cast<double>((true_time - anchor_true_).count());
    return anchor_raw_ + elapsed * effective_rate();
}

Timestamp VirtualClock::peek(Timestamp true_time) const
{
    return Nanos(std::llround(raw_at(true_time))) + offset_correction_;
}

Timestamp VirtualClock::read(Timestamp true_time)
{
    if (true_time < last_true_time_) {
        throw ContractViolation("clock read at " + std::to_string(true_time.count()) +
                                " ns precedes last true time " + std::to_string(last_true_time_.count()) + " ns");
    }
    last_true_time_ = true_time;
    return peek(true_time);
}

void VirtualClock::apply_offset(Nanos o)
{
    offset_correction_ -= o;
}

void VirtualClock::apply_rate(double factor, Timestamp true_time)
{
    if (true_time < last_true_time_) {
        throw ContractViolation("rate change in the past");
    }
    if (!(factor > 0.0)) {
        throw ContractViolation("rate factor must be positive");
    }
    anchor_raw_ = raw_at(true_time);
    anchor_true_ = true_time;
    last_true_time_ = true_time;
    rate_correction_ = std::clamp(rate_correction_ * factor, 1.0 - kMaxRateDeviation, 1.0 + kMaxRateDeviation);
}

double cda_rate(const SyncSample& s1, const SyncSample& s2)
{
    const auto local_span = s2.local_t - s1.local_t;
    if (local_span <= Nanos{0}) {
        throw ContractViolation("rate correction needs a positive local interval, got " +
                                std::to_string(local_span.count()) + " ns");
    }
    const auto remote_span = s2.remote_t - s1.remote_t;
    return static_cast<double>(remote_span.count()) / static_cast<double>(local_span.count());
}

}  // namespace domino
