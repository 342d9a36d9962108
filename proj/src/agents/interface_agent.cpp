#include "trustgate/agents/interface_agent.hpp"

#include "trustgate/error.hpp"
#include "trustgate/protocol/endpoints.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::agents {

namespace {

constexpr std::uint64_t kArrival = 1;
constexpr std::uint64_t kRequestTimeout = 2;

RequestOutcome outcome_of(protocol::RejectReason reason) {
    switch (reason) {
        case protocol::RejectReason::AuthFailed: return RequestOutcome::RejectedAuth;
        case protocol::RejectReason::UserGate: return RequestOutcome::RejectedUserGate;
        case protocol::RejectReason::DomainGate: return RequestOutcome::RejectedDomainGate;
        case protocol::RejectReason::Timeout: return RequestOutcome::RejectedTimeout;
        case protocol::RejectReason::SessionExpired: return RequestOutcome::RejectedSessionExpired;
    }
    return RequestOutcome::RejectedTimeout;
}

} // namespace

std::string_view to_string(RequestOutcome outcome) {
    switch (outcome) {
        case RequestOutcome::Granted: return "granted";
        case RequestOutcome::RejectedAuth: return "rejected:AuthFailed";
        case RequestOutcome::RejectedUserGate: return "rejected:UserGate";
        case RequestOutcome::RejectedDomainGate: return "rejected:DomainGate";
        case RequestOutcome::RejectedTimeout: return "rejected:Timeout";
        case RequestOutcome::RejectedSessionExpired: return "rejected:SessionExpired";
        case RequestOutcome::TimedOut: return "timeout";
    }
    return "unknown";
}

InterfaceAgent::InterfaceAgent(Credentials credentials, std::string proxy_endpoint, AgentContext ctx)
    : Agent(protocol::endpoints::interface_agent(credentials.principal), ctx),
      credentials_(std::move(credentials)),
      proxy_(std::move(proxy_endpoint)) {}

void InterfaceAgent::submit(simnet::Network& net, std::uint64_t req_id, protocol::ServiceRequest request,
                            std::optional<std::string> password) {
    if (!credentials_.principal.valid())
        throw Error(Errc::InvalidArgument, "user and domain ids must be non-empty");
    if (pending_) throw Error(Errc::Busy, "request " + std::to_string(pending_->req_id) + " still in flight");

    pending_ = Pending{req_id, 0};
    knowledge_base_.push_back("submit " + std::to_string(req_id) + " " + request.service_key);
    emit(net, proxy_, req_id,
         protocol::AuthSubmit{credentials_.principal, password.value_or(credentials_.password), std::move(request)});
    net.schedule_timer(id(), timeouts().request, timer_token(req_id, kRequestTimeout));
}

void InterfaceAgent::plan(simnet::Network& net, std::uint64_t req_id, std::uint64_t at,
                          protocol::ServiceRequest request, std::optional<std::string> password) {
    planned_[req_id] = Job{req_id, std::move(request), std::move(password)};
    const auto delay = at > net.now() ? at - net.now() : 0;
    net.schedule_timer(id(), delay, timer_token(req_id, kArrival));
}

void InterfaceAgent::on_timer(std::uint64_t token, simnet::Network& net) {
    const auto req_id = token_request(token);
    switch (token_kind(token)) {
        case kArrival: {
            auto it = planned_.find(req_id);
            if (it == planned_.end()) return;
            backlog_.push_back(std::move(it->second));
            planned_.erase(it);
            drain_backlog(net);
            return;
        }
        case kRequestTimeout:
            if (pending_ && pending_->req_id == req_id) finish(net, RequestOutcome::TimedOut, {});
            return;
        default: return;
    }
}

void InterfaceAgent::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    if (!pending_ || envelope.req_id != pending_->req_id || envelope.sender != proxy_) return;

    if (auto* ok = std::get_if<protocol::AuthResult>(&envelope.body)) {
        // Secure channel established: later traffic uses the session key.
        pending_->session_id = ok->session_id;
        knowledge_base_.push_back("session " + std::to_string(ok->session_id));
        return;
    }
    if (auto* res = std::get_if<protocol::DeliverResult>(&envelope.body)) {
        if (envelope.key_id == 0 || envelope.key_id != pending_->session_id) return;
        finish(net, RequestOutcome::Granted, res->result);
        return;
    }
    if (auto* rej = std::get_if<protocol::Reject>(&envelope.body)) {
        finish(net, outcome_of(rej->reason), {});
        return;
    }
}

void InterfaceAgent::finish(simnet::Network& net, RequestOutcome outcome, std::string result) {
    const auto req_id = pending_->req_id;
    pending_.reset();
    completed_.push_back(CompletedRequest{req_id, outcome, std::move(result), net.now()});
    net.note(id(), req_id, protocol::note::kRequestDone, std::string(to_string(outcome)));
    drain_backlog(net);
}

void InterfaceAgent::drain_backlog(simnet::Network& net) {
    if (pending_ || backlog_.empty()) return;
    auto job = std::move(backlog_.front());
    backlog_.pop_front();
    submit(net, job.req_id, std::move(job.request), std::move(job.password));
}

} // namespace trustgate::agents
