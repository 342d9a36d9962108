#pragma once

// Keyed-integrity channel standing in for the secure connections the agents
// establish. Only integrity is modeled: a seal is HMAC-SHA256 over the
// envelope's canonical bytes, so any change to header, body or tag, or use of
// another key, makes `open` fail.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "trustgate/protocol/envelope.hpp"

namespace trustgate::protocol {

inline constexpr std::size_t kKeySize = 32;
using ChannelKey = std::array<std::uint8_t, kKeySize>;

Seal seal(std::span<const std::uint8_t> payload, const ChannelKey& key);

// True iff `tag` was produced by seal(payload, key).
bool open(std::span<const std::uint8_t> payload, const Seal& tag, const ChannelKey& key);

void seal_envelope(Envelope& envelope, const ChannelKey& key);

// Throws Error(SealViolation).
void open_envelope(const Envelope& envelope, const ChannelKey& key);

// Deterministic key schedule for one simulation: every key derives from a
// master secret seeded by the scenario, so identical seeds give identical
// seals and no hidden entropy enters a run.
class KeyRing {
public:
    explicit KeyRing(std::uint64_t seed);

    // Symmetric in its arguments.
    ChannelKey link_key(std::string_view a, std::string_view b) const;
    ChannelKey session_key(std::uint64_t session_id) const;

    // The key an envelope's key_id selects.
    ChannelKey key_for(const Envelope& envelope) const;

private:
    ChannelKey derive(std::string_view label) const;

    ChannelKey master_{};
};

} // namespace trustgate::protocol
