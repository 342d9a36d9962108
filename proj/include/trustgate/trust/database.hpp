#pragma once

// Persistent knowledge base of a trust agent: one PrincipalRecord per
// principal id, serialized to a versioned binary snapshot ("TGDB").
//
// Snapshot layout (all integers little-endian, doubles as IEEE-754 bits):
//
//   magic        4 bytes  "TGDB"
//   version      u16      = 1
//   count        u32      number of records, ascending by id
//   record * count:
//     length     u32      bytes that follow in this record
//     id         u16 length + bytes
//     negatives  u64
//     total      u64
//     history * total:
//       kind     u8       0 Positive, 1 Wrong, 2 Malicious
//       weight   f64
//       seq      u64
//     value      f64
//     class      u8       0 Trusted, 1 Innocent, 2 NonTrusted
//     streak     u32
//     removed    u8       0 or 1
//   crc32        u32      zlib CRC-32 of every preceding byte
//
// docs/formats.md carries the same table.

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "trustgate/bytes.hpp"
#include "trustgate/trust/model.hpp"

namespace trustgate::trust {

inline constexpr std::uint16_t kSnapshotVersion = 1;

class TrustDatabase {
public:
    using Map = std::map<std::string, PrincipalRecord>;

    // Returns the record, creating it at the initial state on first contact.
    PrincipalRecord& touch(const std::string& id, const TrustParams& params);

    const PrincipalRecord* find(const std::string& id) const;
    PrincipalRecord* find(const std::string& id);

    void put(const std::string& id, PrincipalRecord record) { records_[id] = std::move(record); }

    const Map& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    bool operator==(const TrustDatabase&) const = default;

private:
    Map records_;
};

Bytes save_db(const TrustDatabase& db);

// Throws Error(CorruptSnapshot) on any malformed, truncated or inconsistent
// input, including a CRC mismatch.
TrustDatabase load_db(std::span<const std::uint8_t> snapshot);

} // namespace trustgate::trust
