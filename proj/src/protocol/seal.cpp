#include "trustgate/protocol/seal.hpp"

#include <sodium.h>

#include <string>

#include "trustgate/error.hpp"
#include "trustgate/protocol/codec.hpp"

namespace trustgate::protocol {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

} // namespace

Seal seal(std::span<const std::uint8_t> payload, const ChannelKey& key) {
    static_assert(kSealSize == crypto_auth_hmacsha256_BYTES);
    static_assert(kKeySize == crypto_auth_hmacsha256_KEYBYTES);
    ensure_sodium();
    Seal tag{};
    crypto_auth_hmacsha256(tag.data(), payload.data(), payload.size(), key.data());
    return tag;
}

bool open(std::span<const std::uint8_t> payload, const Seal& tag, const ChannelKey& key) {
    ensure_sodium();
    return crypto_auth_hmacsha256_verify(tag.data(), payload.data(), payload.size(), key.data()) == 0;
}

void seal_envelope(Envelope& envelope, const ChannelKey& key) {
    envelope.seal = seal(sealed_bytes(envelope), key);
}

void open_envelope(const Envelope& envelope, const ChannelKey& key) {
    if (!open(sealed_bytes(envelope), envelope.seal, key))
        throw Error(Errc::SealViolation, "seal does not verify for envelope seq " + std::to_string(envelope.seq));
}

KeyRing::KeyRing(std::uint64_t seed) {
    ensure_sodium();
    std::array<std::uint8_t, 8> seed_bytes{};
    for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    static constexpr std::string_view kLabel = "trustgate/master/v1";
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, master_.size());
    crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(kLabel.data()), kLabel.size());
    crypto_generichash_update(&st, seed_bytes.data(), seed_bytes.size());
    crypto_generichash_final(&st, master_.data(), master_.size());
}

ChannelKey KeyRing::derive(std::string_view label) const {
    ChannelKey out{};
    crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(label.data()), label.size(),
                       master_.data(), master_.size());
    return out;
}

ChannelKey KeyRing::link_key(std::string_view a, std::string_view b) const {
    if (b < a) std::swap(a, b);
    std::string label = "link";
    label.push_back('\0');
    label.append(a);
    label.push_back('\0');
    label.append(b);
    return derive(label);
}

ChannelKey KeyRing::session_key(std::uint64_t session_id) const {
    std::string label = "session";
    label.push_back('\0');
    label.append(std::to_string(session_id));
    return derive(label);
}

ChannelKey KeyRing::key_for(const Envelope& envelope) const {
    return envelope.key_id == 0 ? link_key(envelope.sender, envelope.receiver) : session_key(envelope.key_id);
}

} // namespace trustgate::protocol
