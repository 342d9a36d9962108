#pragma once

// Canonical wire encoding of an Envelope.
//
//   version   u8       = 1
//   msg_type  u8       MsgType value
//   seq       u64
//   req_id    u64
//   key_id    u64
//   sender    u16 length + bytes
//   receiver  u16 length + bytes
//   body_len  u32
//   body      body_len bytes, field order fixed per msg_type
//   seal      32 bytes HMAC-SHA256 over everything before it
//
// Decoding accepts exactly the byte strings encode produces: booleans must be
// 0/1, enums in range, no trailing bytes anywhere.

#include <cstddef>
#include <optional>
#include <string>
#include <span>

#include "trustgate/bytes.hpp"
#include "trustgate/protocol/envelope.hpp"

namespace trustgate::protocol {

inline constexpr std::uint8_t kWireVersion = 1;

Bytes encode(const Envelope& envelope);

// Throws Error(MalformedEnvelope).
Envelope decode(std::span<const std::uint8_t> bytes);

// Bytes covered by the seal: the encoding without its trailing tag.
Bytes sealed_bytes(const Envelope& envelope);

struct Region {
    std::size_t offset = 0;
    std::size_t length = 0;
};

// Sender field of an encoding whose header parses, even if the body does not.
std::optional<std::string> peek_sender(std::span<const std::uint8_t> bytes);

// Location of the body inside an encoding; used by the tamper fault.
Region body_region(std::span<const std::uint8_t> bytes);

} // namespace trustgate::protocol
