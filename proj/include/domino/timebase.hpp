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

// timebase.hpp
//
// Simulated oscillators and the clock-discipline primitives that turn
// synchronization opportunities into offset and rate corrections.

#ifndef DOMINO_TIMEBASE_HPP
#define DOMINO_TIMEBASE_HPP

#include <domino/error.hpp>
#include <domino/wire.hpp>

namespace domino {

inline constexpr double kMaxFreqErrorPpm = 100.0;
inline constexpr double kMaxRateDeviation = 1e-3;

/// A free-running oscillator with a constant frequency error plus the
/// offset and rate corrections applied by the node's servo.
///
/// Local time is piecewise linear in true time. Every rate change
/// re-anchors the line at the true time of the change so that rate
/// corrections never step the clock; only offset corrections do.
class VirtualClock {
  public:
    /// `freq_error_ppm` must satisfy |e_f| <= `max_freq_error_ppm`.
    /// `initial_offset` is the local reading at true time zero.
    explicit VirtualClock(double freq_error_ppm = 0.0, Nanos initial_offset = Nanos{0},
                          double max_freq_error_ppm = kMaxFreqErrorPpm);

    /// Local reading at `true_time`. Throws ContractViolation if
    /// `true_time` precedes the last instant this clock was read or
    /// adjusted at.
    Timestamp read(Timestamp true_time);

    /// Same as read() without touching the bookkeeping.
    Timestamp peek(Timestamp true_time) const;

    /// Steps the clock: offset_correction -= o.
    void apply_offset(Nanos o);

    /// Multiplies rate_correction by `factor` from `true_time` onwards; the
    /// resulting correction is clamped to 1 +/- kMaxRateDeviation.
    void apply_rate(double factor, Timestamp true_time);

    double freq_error_ppm() const { return freq_error_ppm_; }
    double rate_correction() const { return rate_correction_; }
    Nanos offset_correction() const { return offset_correction_; }
    Timestamp last_true_time() const { return last_true_time_; }

    /// Effective local-over-true frequency ratio.
    double effective_rate() const { return (1.0 + freq_error_ppm_ * 1e-6) * rate_correction_; }

  private:
    double raw_at(Timestamp true_time) const;

    double freq_error_ppm_;
    double rate_correction_ = 1.0;
    Nanos offset_correction_{0};
    Timestamp last_true_time_{0};
    // Raw (rate-scaled, offset-free) local time at anchor_true_.
    double anchor_raw_ = 0.0;
    Timestamp anchor_true_{0};
};

/// One synchronization opportunity: the same beacon timestamped locally and
/// by the parent (in the parent's time base).
struct SyncSample {
    Timestamp local_t{0};
    Timestamp remote_t{0};

    constexpr bool operator==(const SyncSample&) const = default;
};

/// Offset of the local clock against the parent, o = local - remote. The
/// caller subtracts it from the offset correction.
constexpr Nanos cda_offset(const SyncSample& sample)
{
    return sample.local_t - sample.remote_t;
}

/// Rate factor r = (remote2 - remote1) / (local2 - local1). Throws
/// ContractViolation when the local interval is not positive.
double cda_rate(const SyncSample& s1, const SyncSample& s2);

}  // namespace domino

#endif  // DOMINO_TIMEBASE_HPP
