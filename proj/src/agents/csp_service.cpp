#include "trustgate/agents/csp_service.hpp"

#include "trustgate/protocol/endpoints.hpp"

namespace trustgate::agents {

namespace ep = protocol::endpoints;

CspService::CspService(std::map<std::string, std::string> catalog, DomainTrustAgent& monitor, AgentContext ctx)
    : Agent(std::string(ep::kCspService), ctx), catalog_(std::move(catalog)), monitor_(monitor) {}

std::string CspService::lookup(const std::string& service_key) const {
    auto it = catalog_.find(service_key);
    return it == catalog_.end() ? std::string("unknown-service") : it->second;
}

void CspService::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    auto* call = std::get_if<protocol::ServiceCall>(&envelope.body);
    if (!call || envelope.sender != ep::mobile_agent(envelope.req_id)) return;

    auto it = served_.find(envelope.req_id);
    if (it == served_.end()) {
        protocol::ServiceResult result;
        result.result = lookup(call->request.service_key);
        result.assessment = monitor_.report(net, envelope.req_id, call->principal, call->request.conduct);
        it = served_.emplace(envelope.req_id, std::move(result)).first;
    }
    emit(net, envelope.sender, envelope.req_id, it->second);
}

} // namespace trustgate::agents
