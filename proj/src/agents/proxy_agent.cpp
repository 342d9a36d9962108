#include "trustgate/agents/proxy_agent.hpp"

#include "json.hpp"

#include "trustgate/protocol/endpoints.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::agents {

namespace ep = protocol::endpoints;

namespace {

constexpr std::uint64_t kUserGateTimeout = 1;
constexpr std::uint64_t kAgentTimeout = 2;

std::string_view to_string(AuthOutcome outcome) {
    switch (outcome) {
        case AuthOutcome::Ok: return "ok";
        case AuthOutcome::UnknownUser: return "UnknownUser";
        case AuthOutcome::BadPassword: return "BadPassword";
        case AuthOutcome::Removed: return "Removed";
    }
    return "?";
}

} // namespace

std::string to_jsonl(const std::vector<AuditEntry>& log) {
    std::string out;
    for (const auto& e : log) {
        nlohmann::ordered_json j;
        j["time"] = e.time;
        j["req_id"] = e.req_id;
        j["principal"] = e.principal;
        j["event"] = e.event;
        j["detail"] = e.detail;
        out += j.dump();
        out += '\n';
    }
    return out;
}

ProxyAgent::ProxyAgent(std::string domain, DomainDirectory& directory, AgentContext ctx)
    : Agent(ep::proxy(domain), ctx),
      domain_(std::move(domain)),
      directory_(directory),
      tua_(ep::trust_user_agent(domain_)) {}

void ProxyAgent::expire_session(std::uint64_t req_id) {
    if (auto it = sessions_.find(req_id); it != sessions_.end()) it->second.expired = true;
}

bool ProxyAgent::has_session(std::uint64_t req_id) const {
    auto it = sessions_.find(req_id);
    return it != sessions_.end() && it->second.phase != Phase::Closed && !it->second.expired;
}

void ProxyAgent::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    if (auto* msg = std::get_if<protocol::AuthSubmit>(&envelope.body)) {
        on_auth(envelope, *msg, net);
        return;
    }

    auto it = sessions_.find(envelope.req_id);
    if (it == sessions_.end() || it->second.phase == Phase::Closed) return;
    Session& s = it->second;
    const auto req_id = envelope.req_id;

    if (auto* msg = std::get_if<protocol::TrustReplyUser>(&envelope.body)) {
        if (envelope.sender != tua_ || s.phase != Phase::AwaitUser || msg->principal != s.principal) return;
        on_user_reply(s, req_id, msg->trusted, net);
        return;
    }
    if (envelope.sender != ep::mobile_agent(req_id) || s.phase != Phase::AwaitAgent) return;
    if (auto* msg = std::get_if<protocol::MigrateBack>(&envelope.body)) {
        if (envelope.key_id != req_id || msg->agent.principal != s.principal) return;
        on_return(s, envelope, *msg, net);
        return;
    }
    if (auto* msg = std::get_if<protocol::Reject>(&envelope.body)) on_agent_reject(s, req_id, msg->reason, net);
}

void ProxyAgent::on_auth(const protocol::Envelope& envelope, const protocol::AuthSubmit& msg,
                         simnet::Network& net) {
    const auto req_id = envelope.req_id;
    if (sessions_.contains(req_id)) return;

    const auto key = msg.principal.key();
    AuthOutcome outcome = AuthOutcome::UnknownUser;
    if (msg.principal.domain_id == domain_ && envelope.sender == ep::interface_agent(msg.principal))
        outcome = directory_.authenticate(msg.principal.user_id, msg.password);

    Session s;
    s.principal = msg.principal;
    s.request = msg.request;
    s.interface = envelope.sender;

    if (outcome != AuthOutcome::Ok) {
        // The wire reply does not say which check failed.
        audit(net, req_id, key, "auth_failed", std::string(to_string(outcome)));
        s.phase = Phase::Closed;
        sessions_.emplace(req_id, std::move(s));
        emit(net, envelope.sender, req_id, protocol::Reject{protocol::RejectReason::AuthFailed});
        return;
    }

    audit(net, req_id, key, "auth_ok");
    auto& session = sessions_.emplace(req_id, std::move(s)).first->second;
    emit(net, session.interface, req_id, protocol::AuthResult{req_id});

    if (!gates_users()) {
        spawn(session, req_id, net);
        return;
    }
    emit(net, tua_, req_id, protocol::TrustQueryUser{session.principal});
    net.schedule_timer(id(), timeouts().gate, timer_token(req_id, kUserGateTimeout));
}

void ProxyAgent::on_user_reply(Session& s, std::uint64_t req_id, bool trusted, simnet::Network& net) {
    audit(net, req_id, s.principal.key(), "user_gate", trusted ? "trusted" : "not_trusted");
    if (s.expired) {
        net.note(id(), req_id, protocol::note::kSessionExpired, s.principal.key());
        reject(s, req_id, protocol::RejectReason::SessionExpired, net);
        return;
    }
    if (trusted)
        spawn(s, req_id, net);
    else
        reject(s, req_id, protocol::RejectReason::UserGate, net);
}

void ProxyAgent::spawn(Session& s, std::uint64_t req_id, simnet::Network& net) {
    protocol::MobileAgentState agent;
    agent.ma_id = req_id;
    agent.principal = s.principal;
    agent.origin_proxy = id();
    agent.session_id = req_id;
    agent.request = s.request;

    s.phase = Phase::AwaitAgent;
    net.note(id(), req_id, protocol::note::kMaSpawn, ep::mobile_agent(req_id));
    audit(net, req_id, s.principal.key(), "ma_spawned");
    emit(net, std::string(ep::kCspHost), req_id, protocol::MigrateOut{std::move(agent)});
    net.schedule_timer(id(), timeouts().mobile_agent, timer_token(req_id, kAgentTimeout));
}

void ProxyAgent::on_return(Session& s, const protocol::Envelope& envelope, const protocol::MigrateBack& msg,
                           simnet::Network& net) {
    const auto req_id = envelope.req_id;
    net.note(id(), req_id, protocol::note::kMaDestroy, envelope.sender);

    // The CSP-side outcome stands whether or not the user still gets the result.
    emit(net, tua_, req_id, protocol::TrustUpdate{s.principal, msg.assessment});

    if (s.expired || !directory_.is_member(s.principal.user_id)) {
        net.note(id(), req_id, protocol::note::kSessionExpired, s.principal.key());
        audit(net, req_id, s.principal.key(), "result_discarded", "session expired");
        reject(s, req_id, protocol::RejectReason::SessionExpired, net);
        return;
    }
    s.phase = Phase::Closed;
    audit(net, req_id, s.principal.key(), "delivered");
    emit(net, s.interface, req_id, protocol::DeliverResult{msg.result}, req_id);
}

void ProxyAgent::on_agent_reject(Session& s, std::uint64_t req_id, protocol::RejectReason reason,
                                 simnet::Network& net) {
    if (reason == protocol::RejectReason::DomainGate)
        emit(net, tua_, req_id,
             protocol::BreachNotice{s.principal, trust::ActionKind::Wrong, protocol::NoticeSource::Proxy});
    reject(s, req_id, reason, net);
}

void ProxyAgent::on_timer(std::uint64_t token, simnet::Network& net) {
    const auto req_id = token_request(token);
    auto it = sessions_.find(req_id);
    if (it == sessions_.end()) return;
    Session& s = it->second;

    if (token_kind(token) == kUserGateTimeout && s.phase == Phase::AwaitUser) {
        reject(s, req_id, protocol::RejectReason::Timeout, net);
    } else if (token_kind(token) == kAgentTimeout && s.phase == Phase::AwaitAgent) {
        net.note(id(), req_id, protocol::note::kMaLost, ep::mobile_agent(req_id));
        reject(s, req_id, protocol::RejectReason::Timeout, net);
    }
}

void ProxyAgent::reject(Session& s, std::uint64_t req_id, protocol::RejectReason reason, simnet::Network& net) {
    s.phase = Phase::Closed;
    audit(net, req_id, s.principal.key(), "rejected", std::string(protocol::to_string(reason)));
    emit(net, s.interface, req_id, protocol::Reject{reason});
}

void ProxyAgent::audit(const simnet::Network& net, std::uint64_t req_id, const std::string& principal,
                       std::string event, std::string detail) {
    audit_.push_back(AuditEntry{net.now(), req_id, principal, std::move(event), std::move(detail)});
}

} // namespace trustgate::agents
