#include "trustgate/agents/agent.hpp"

#include "trustgate/error.hpp"
#include "trustgate/protocol/codec.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::agents {

void Agent::on_deliver(std::span<const std::uint8_t> bytes, simnet::Network& net) {
    protocol::Envelope envelope;
    try {
        envelope = protocol::decode(bytes);
        protocol::open_envelope(envelope, ctx_.keys->key_for(envelope));
    } catch (const Error& e) {
        log_violation(protocol::peek_sender(bytes).value_or("?"), net, to_string(e.code()));
        return;
    }
    if (envelope.receiver != id_) {
        log_violation(envelope.sender, net, "misrouted");
        return;
    }
    handle(envelope, net);
}

void Agent::emit(simnet::Network& net, const std::string& to, std::uint64_t req_id, protocol::Body body,
                 std::uint64_t key_id) {
    protocol::Envelope envelope;
    envelope.seq = net.next_envelope_seq();
    envelope.req_id = req_id;
    envelope.key_id = key_id;
    envelope.sender = id_;
    envelope.receiver = to;
    envelope.body = std::move(body);
    protocol::seal_envelope(envelope, ctx_.keys->key_for(envelope));
    net.send(envelope);
}

void Agent::log_violation(const std::string& sender, simnet::Network& net, std::string_view why) {
    auto& ledger = peer_violations_[sender];
    ledger = trust::record_action(std::move(ledger), trust::ActionKind::Wrong, ctx_.params);
    net.note(id_, 0, protocol::note::kSealViolation, sender + ":" + std::string(why));
}

} // namespace trustgate::agents
