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

#include <domino/wire.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

namespace domino {

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    return -1;
}

class Writer {
  public:
    explicit Writer(std::size_t capacity) { buf_.reserve(capacity); }

    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u16(std::uint16_t v)
    {
        u8(static_cast<std::uint8_t>(v >> 8));
        u8(static_cast<std::uint8_t>(v));
    }

    void u32(std::uint32_t v)
    {
        for (int shift = 24; shift >= 0; shift -= 8) {
            u8(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void u64(std::uint64_t v)
    {
        for (int shift = 56; shift >= 0; shift -= 8) {
            u8(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

    void id(const NodeId& id) { buf_.insert(buf_.end(), id.octets().begin(), id.octets().end()); }

    std::vector<std::uint8_t> take() { return std::move(buf_); }

  private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }

    void need(std::size_t n, const char* field) const
    {
        if (remaining() < n) {
            throw WireError(field, "truncated (need " + std::to_string(n) + " bytes, have " +
                                       std::to_string(remaining()) + ")");
        }
    }

    std::uint8_t u8(const char* field)
    {
        need(1, field);
        return bytes_[pos_++];
    }

    std::uint16_t u16(const char* field)
    {
        need(2, field);
        std::uint16_t v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    std::uint32_t u32(const char* field)
    {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v = (v << 8) | bytes_[pos_++];
        }
        return v;
    }

    std::uint64_t u64(const char* field)
    {
        need(8, field);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v = (v << 8) | bytes_[pos_++];
        }
        return v;
    }

    std::int64_t i64(const char* field) { return static_cast<std::int64_t>(u64(field)); }

    NodeId id(const char* field)
    {
        need(6, field);
        NodeId::Octets o{};
        std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), 6, o.begin());
        pos_ += 6;
        return NodeId(o);
    }

  private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void check_records(const std::vector<BeaconRecord>& records)
{
    if (records.empty()) {
        throw WireError("records", "at least one record required");
    }
    if (records.size() > wire::kMaxRecords) {
        throw WireError("records", std::to_string(records.size()) + " records exceed the codec limit of " +
                                       std::to_string(wire::kMaxRecords));
    }
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].t < records[i - 1].t) {
            throw WireError("records", "not sorted by ascending t at index " + std::to_string(i));
        }
    }
    std::set<std::tuple<NodeId, std::uint64_t>> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!seen.emplace(records[i].ap, records[i].tsf.value).second) {
            throw WireError("records", "duplicate (ap, tsf) at index " + std::to_string(i));
        }
    }
}

}  // namespace

std::optional<NodeId> NodeId::parse(std::string_view text)
{
    std::string digits;
    digits.reserve(12);
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ':') {
            // separators only between octets
            if (digits.size() % 2 != 0 || digits.empty() || i + 1 == text.size()) {
                return std::nullopt;
            }
            continue;
        }
        if (hex_value(c) < 0) {
            return std::nullopt;
        }
        digits.push_back(c);
    }
    if (digits.size() != 12) {
        return std::nullopt;
    }
    Octets o{};
    for (std::size_t i = 0; i < 6; ++i) {
        o[i] = static_cast<std::uint8_t>(hex_value(digits[2 * i]) * 16 + hex_value(digits[2 * i + 1]));
    }
    return NodeId(o);
}

std::string NodeId::to_string() const
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s(12, '0');
    for (std::size_t i = 0; i < 6; ++i) {
        s[2 * i] = kHex[octets_[i] >> 4];
        s[2 * i + 1] = kHex[octets_[i] & 0xF];
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const NodeId& id)
{
    return os << id.to_string();
}

std::string to_string(const ClockQuality& q)
{
    if (q.is_infinite()) {
        return "inf";
    }
    std::ostringstream os;
    os << static_cast<int>(q.priority1) << '/' << static_cast<int>(q.clock_class) << '/'
       << static_cast<int>(q.accuracy) << '/' << q.variance << '/' << static_cast<int>(q.priority2) << '/'
       << q.identity;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ClockQuality& q)
{
    return os << to_string(q);
}

std::string to_string(ErrorEstimate e)
{
    return e.is_infinite() ? std::string("inf") : std::to_string(e.ns());
}

std::vector<std::uint8_t> encode_fup(const FupMessage& msg)
{
    check_records(msg.records);

    Writer w(wire::encoded_size(msg.records.size()));
    w.u16(wire::kMagic);
    w.u8(wire::kVersion);
    w.id(msg.sender);
    w.u32(msg.seq);
    w.i64(msg.e.ns());
    w.u8(msg.sq.priority1);
    w.u8(msg.sq.clock_class);
    w.u8(msg.sq.accuracy);
    w.u16(msg.sq.variance);
    w.u8(msg.sq.priority2);
    w.id(msg.sq.identity);
    w.u8(static_cast<std::uint8_t>(msg.records.size()));
    for (const auto& r : msg.records) {
        w.id(r.ap);
        w.u64(r.tsf.value);
        w.i64(r.t.count());
    }
    return w.take();
}

FupMessage decode_fup(std::span<const std::uint8_t> bytes)
{
    Reader r(bytes);
    FupMessage msg;

    if (r.u16("magic") != wire::kMagic) {
        throw WireError("magic", "bad magic");
    }
    if (const auto version = r.u8("version"); version != wire::kVersion) {
        throw WireError("version", "unsupported version " + std::to_string(version));
    }
    msg.sender = r.id("sender");
    msg.seq = r.u32("seq");
    const std::int64_t e = r.i64("e");
    if (e < 0) {
        throw WireError("e", "negative error estimate");
    }
    msg.e = ErrorEstimate::from_ns(e);
    msg.sq.priority1 = r.u8("sq.priority1");
    msg.sq.clock_class = r.u8("sq.clock_class");
    msg.sq.accuracy = r.u8("sq.accuracy");
    msg.sq.variance = r.u16("sq.variance");
    msg.sq.priority2 = r.u8("sq.priority2");
    msg.sq.identity = r.id("sq.identity");

    const std::size_t count = r.u8("record_count");
    r.need(count * wire::kRecordSize, "records");
    msg.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BeaconRecord rec;
        rec.ap = r.id("records.ap");
        rec.tsf.value = r.u64("records.tsf");
        rec.t = Nanos(r.i64("records.t"));
        msg.records.push_back(rec);
    }
    if (r.remaining() != 0) {
        throw WireError("trailing", std::to_string(r.remaining()) + " unexpected trailing bytes");
    }
    check_records(msg.records);
    return msg;
}

}  // namespace domino
