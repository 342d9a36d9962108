#include "trustgate/agents/mobile_agent.hpp"

#include "trustgate/protocol/endpoints.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::agents {

namespace ep = protocol::endpoints;

namespace {

constexpr std::uint64_t kDomainTimeout = 1;
constexpr std::uint64_t kServiceTimeout = 2;
constexpr std::uint64_t kRetryTimeout = 3;

} // namespace

std::string_view to_string(MaState state) {
    switch (state) {
        case MaState::Spawned: return "Spawned";
        case MaState::AtCsp: return "AtCSP";
        case MaState::Returning: return "Returning";
        case MaState::Destroyed: return "Destroyed";
    }
    return "?";
}

MobileAgent::MobileAgent(protocol::MobileAgentState state, AgentContext ctx)
    : Agent(ep::mobile_agent(state.ma_id), ctx), carried_(std::move(state)) {}

void MobileAgent::arrive(simnet::Network& net) {
    state_ = MaState::AtCsp;
    net.note(id(), carried_.ma_id, protocol::note::kMaArrive, carried_.principal.key());
    if (!gates_domain()) {
        call_service(net);
        return;
    }
    emit(net, std::string(ep::kDomainTrustAgent), carried_.ma_id,
         protocol::DomainTrustQuery{carried_.principal, carried_.ma_id});
    net.schedule_timer(id(), timeouts().gate, timer_token(carried_.ma_id, kDomainTimeout));
}

void MobileAgent::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    if (state_ != MaState::AtCsp || envelope.req_id != carried_.ma_id) return;

    if (auto* reply = std::get_if<protocol::DomainTrustReply>(&envelope.body)) {
        if (envelope.sender != ep::kDomainTrustAgent || domain_cleared_ || service_calls_ > 0) return;
        if (reply->principal != carried_.principal) return;
        if (!reply->trusted) {
            // The request is deleted and the proxy informed.
            give_up(net, protocol::RejectReason::DomainGate);
            return;
        }
        domain_cleared_ = true;
        call_service(net);
        return;
    }
    if (auto* res = std::get_if<protocol::ServiceResult>(&envelope.body)) {
        if (envelope.sender != ep::kCspService || service_calls_ == 0) return;
        state_ = MaState::Returning;
        emit(net, carried_.origin_proxy, carried_.ma_id,
             protocol::MigrateBack{carried_, res->result, res->assessment}, carried_.session_id);
        destroy(net);
    }
}

void MobileAgent::on_timer(std::uint64_t token, simnet::Network& net) {
    if (state_ != MaState::AtCsp) return;
    switch (token_kind(token)) {
        case kDomainTimeout:
            if (!domain_cleared_ && service_calls_ == 0) give_up(net, protocol::RejectReason::Timeout);
            return;
        case kServiceTimeout:
            if (service_calls_ == 1) call_service(net);
            return;
        case kRetryTimeout: give_up(net, protocol::RejectReason::Timeout); return;
        default: return;
    }
}

void MobileAgent::call_service(simnet::Network& net) {
    ++service_calls_;
    emit(net, std::string(ep::kCspService), carried_.ma_id,
         protocol::ServiceCall{carried_.principal, carried_.request, true, domain_cleared_});
    net.schedule_timer(id(), timeouts().gate,
                       timer_token(carried_.ma_id, service_calls_ == 1 ? kServiceTimeout : kRetryTimeout));
}

void MobileAgent::give_up(simnet::Network& net, protocol::RejectReason reason) {
    emit(net, carried_.origin_proxy, carried_.ma_id, protocol::Reject{reason});
    net.note(id(), carried_.ma_id, protocol::note::kMaDestroy, id());
    destroy(net);
}

void MobileAgent::destroy(simnet::Network& net) {
    state_ = MaState::Destroyed;
    net.detach(id());
}

CspHost::CspHost(AgentContext ctx) : Agent(std::string(ep::kCspHost), ctx) {}

const MobileAgent* CspHost::agent(std::uint64_t ma_id) const {
    auto it = agents_.find(ma_id);
    return it == agents_.end() ? nullptr : it->second.get();
}

void CspHost::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    auto* msg = std::get_if<protocol::MigrateOut>(&envelope.body);
    if (!msg || !ep::is_proxy(envelope.sender) || msg->agent.origin_proxy != envelope.sender) return;
    if (msg->agent.ma_id != envelope.req_id || agents_.contains(msg->agent.ma_id)) return;

    auto agent = make_agent(msg->agent);
    auto* raw = agent.get();
    agents_.emplace(msg->agent.ma_id, std::move(agent));
    net.attach(raw->id(), raw);
    raw->arrive(net);
}

std::unique_ptr<MobileAgent> CspHost::make_agent(protocol::MobileAgentState state) {
    return std::make_unique<MobileAgent>(std::move(state), ctx());
}

} // namespace trustgate::agents
