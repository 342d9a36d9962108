#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "trustgate/protocol/envelope.hpp"
#include "trustgate/protocol/seal.hpp"
#include "trustgate/simnet/network.hpp"
#include "trustgate/trust/model.hpp"

namespace trustgate::agents {

// Gate and lifecycle timeouts in simulated time units. Every wait fails
// closed with a Reject when it expires.
struct Timeouts {
    std::uint64_t gate = 10;
    std::uint64_t mobile_agent = 50;
    std::uint64_t request = 80;

    static Timeouts from_gate(std::uint64_t gate) { return Timeouts{gate, 5 * gate, 8 * gate}; }
    bool operator==(const Timeouts&) const = default;
};

struct AgentContext {
    const protocol::KeyRing* keys = nullptr;
    trust::TrustParams params;
    Timeouts timeouts;
};

// Common receive path: decode, verify the seal, then dispatch. An envelope
// that fails to decode or verify is dropped and a Wrong action is logged
// against its sender in this agent's peer ledger.
class Agent : public simnet::Endpoint {
public:
    Agent(std::string id, AgentContext ctx) : id_(std::move(id)), ctx_(ctx) {}

    const std::string& id() const { return id_; }

    void on_deliver(std::span<const std::uint8_t> bytes, simnet::Network& net) final;

    const std::map<std::string, trust::TrustLedger>& peer_violations() const { return peer_violations_; }

protected:
    virtual void handle(const protocol::Envelope& envelope, simnet::Network& net) = 0;

    // Seals with the link key when key_id == 0, else with that session key.
    void emit(simnet::Network& net, const std::string& to, std::uint64_t req_id, protocol::Body body,
              std::uint64_t key_id = 0);

    const AgentContext& ctx() const { return ctx_; }
    const trust::TrustParams& params() const { return ctx_.params; }
    const Timeouts& timeouts() const { return ctx_.timeouts; }

private:
    void log_violation(const std::string& sender, simnet::Network& net, std::string_view why);

    std::string id_;
    AgentContext ctx_;
    std::map<std::string, trust::TrustLedger> peer_violations_;
};

// Timer tokens pack a request id with a small kind tag.
inline std::uint64_t timer_token(std::uint64_t req_id, std::uint64_t kind) { return req_id * 8 + kind; }
inline std::uint64_t token_request(std::uint64_t token) { return token / 8; }
inline std::uint64_t token_kind(std::uint64_t token) { return token % 8; }

} // namespace trustgate::agents
