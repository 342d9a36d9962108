#pragma once

#include <map>
#include <string>

#include "trustgate/agents/agent.hpp"
#include "trustgate/agents/trust_agents.hpp"

namespace trustgate::agents {

// Stub cloud service. Answers ServiceCall from mobile agents by catalog
// lookup and hands the observed conduct of the user to the domain trust
// agent before replying.
class CspService : public Agent {
public:
    CspService(std::map<std::string, std::string> catalog, DomainTrustAgent& monitor, AgentContext ctx);

    // Unknown keys map to "unknown-service".
    std::string lookup(const std::string& service_key) const;
    std::size_t served() const { return served_.size(); }

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

private:
    std::map<std::string, std::string> catalog_;
    DomainTrustAgent& monitor_;
    // One report per request; a retried call gets the stored reply.
    std::map<std::uint64_t, protocol::ServiceResult> served_;
};

} // namespace trustgate::agents
