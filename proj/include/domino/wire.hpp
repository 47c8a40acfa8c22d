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

// wire.hpp
//
// Protocol value types (identities, beacons, follow-up messages, clock
// quality descriptors) and the binary follow-up codec.

#ifndef DOMINO_WIRE_HPP
#define DOMINO_WIRE_HPP

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace domino {

/// Signed nanosecond quantity. Used both for instants on some clock and
/// for durations.
using Nanos = std::chrono::nanoseconds;
using Timestamp = Nanos;

/// 6-byte node identifier with MAC-address semantics. Ordered by
/// lexicographic byte comparison.
class NodeId {
  public:
    using Octets = std::array<std::uint8_t, 6>;

    constexpr NodeId() = default;
    constexpr explicit NodeId(const Octets& octets) : octets_(octets) {}

    /// Builds an id whose low 48 bits are taken from `value`.
    static constexpr NodeId from_u64(std::uint64_t value)
    {
        Octets o{};
        for (int i = 5; i >= 0; --i) {
            o[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value & 0xFF);
            value >>= 8;
        }
        return NodeId(o);
    }

    /// Parses exactly 12 hex digits, optionally separated by ':' every two.
    /// Returns nullopt on malformed input.
    static std::optional<NodeId> parse(std::string_view text);

    static constexpr NodeId broadcast()
    {
        return NodeId(Octets{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF});
    }

    constexpr const Octets& octets() const { return octets_; }

    constexpr std::uint64_t to_u64() const
    {
        std::uint64_t v = 0;
        for (auto b : octets_) {
            v = (v << 8) | b;
        }
        return v;
    }

    /// 12 lowercase hex digits, no separators.
    std::string to_string() const;

    constexpr auto operator<=>(const NodeId&) const = default;

  private:
    Octets octets_{};
};

std::ostream& operator<<(std::ostream& os, const NodeId& id);

/// 64-bit TSF counter value in microseconds. Serves as beacon instance
/// identifier together with the AP identity.
struct Tsf {
    std::uint64_t value = 0;

    constexpr auto operator<=>(const Tsf&) const = default;
};

/// One beacon as emitted by an access point.
struct Beacon {
    NodeId ap;
    Tsf tsf;

    constexpr auto operator<=>(const Beacon&) const = default;
};

/// One logged beacon: originating AP, its TSF, and the local arrival
/// timestamp taken by the logging station.
struct BeaconRecord {
    NodeId ap;
    Tsf tsf;
    Timestamp t{0};

    constexpr bool operator==(const BeaconRecord&) const = default;
};

/// Clock-quality descriptor. Lexicographic over the fields in declaration
/// order; lower compares as better.
struct ClockQuality {
    std::uint8_t priority1 = 0xFF;
    std::uint8_t clock_class = 0xFF;
    std::uint8_t accuracy = 0xFF;
    std::uint16_t variance = 0xFFFF;
    std::uint8_t priority2 = 0xFF;
    NodeId identity = NodeId::broadcast();

    /// The reserved quality, worse than any finite descriptor. All-ones in
    /// every field.
    static constexpr ClockQuality infinite() { return ClockQuality{}; }

    constexpr bool is_infinite() const { return *this == infinite(); }

    constexpr auto operator<=>(const ClockQuality&) const = default;
};

enum class QualityOrder { better, equal, worse };

/// Three-way comparison where `better` means `a` is the higher-quality
/// (numerically lower) descriptor.
constexpr QualityOrder compare_clock_quality(const ClockQuality& a, const ClockQuality& b)
{
    const auto c = a <=> b;
    if (c < 0) {
        return QualityOrder::better;
    }
    if (c > 0) {
        return QualityOrder::worse;
    }
    return QualityOrder::equal;
}

constexpr bool is_better(const ClockQuality& a, const ClockQuality& b)
{
    return compare_clock_quality(a, b) == QualityOrder::better;
}

std::string to_string(const ClockQuality& q);
std::ostream& operator<<(std::ostream& os, const ClockQuality& q);

/// Nonnegative synchronization-error estimate in nanoseconds, or infinity.
/// Addition saturates at infinity.
class ErrorEstimate {
  public:
    constexpr ErrorEstimate() = default;

    static constexpr ErrorEstimate infinite() { return ErrorEstimate(kInfiniteNs); }
    static constexpr ErrorEstimate from_ns(std::int64_t ns)
    {
        return ns >= kInfiniteNs ? infinite() : ErrorEstimate(ns < 0 ? 0 : ns);
    }

    constexpr bool is_infinite() const { return ns_ == kInfiniteNs; }

    /// Raw value; INT64_MAX encodes infinity (also on the wire).
    constexpr std::int64_t ns() const { return ns_; }

    constexpr auto operator<=>(const ErrorEstimate&) const = default;

    friend constexpr ErrorEstimate operator+(ErrorEstimate a, ErrorEstimate b)
    {
        if (a.is_infinite() || b.is_infinite() || a.ns_ > kInfiniteNs - b.ns_) {
            return infinite();
        }
        return ErrorEstimate(a.ns_ + b.ns_);
    }

  private:
    static constexpr std::int64_t kInfiniteNs = std::numeric_limits<std::int64_t>::max();

    constexpr explicit ErrorEstimate(std::int64_t ns) : ns_(ns) {}

    std::int64_t ns_ = 0;
};

std::string to_string(ErrorEstimate e);

/// Follow-up message broadcast by a master clock.
struct FupMessage {
    NodeId sender;
    // Source sequence number: an acting grandmaster counts its follow-ups,
    // a synchronized station repeats the newest value its parent relayed.
    std::uint32_t seq = 0;
    std::vector<BeaconRecord> records;  // non-empty, ascending t
    ErrorEstimate e;
    ClockQuality sq;

    bool operator==(const FupMessage&) const = default;
};

/// Raised by the codec. `field()` names the offending field.
class WireError : public std::runtime_error {
  public:
    WireError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field))
    {
    }

    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

namespace wire {

inline constexpr std::uint16_t kMagic = 0x444F;  // "DO"
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 2 + 1 + 6 + 4 + 8 + 12 + 1;
inline constexpr std::size_t kRecordSize = 6 + 8 + 8;
inline constexpr std::size_t kMaxRecords = 255;

constexpr std::size_t encoded_size(std::size_t record_count)
{
    return kHeaderSize + record_count * kRecordSize;
}

}  // namespace wire

/// Serializes `msg` big-endian. Throws WireError if the record list is
/// empty, longer than 255 entries, unsorted by t, or repeats an (ap, tsf).
std::vector<std::uint8_t> encode_fup(const FupMessage& msg);

/// Parses an encoded follow-up. Throws WireError naming the field on
/// truncation, bad magic/version, unsorted or duplicate records, and
/// trailing bytes.
FupMessage decode_fup(std::span<const std::uint8_t> bytes);

}  // namespace domino

#endif  // DOMINO_WIRE_HPP
