#pragma once

#include <map>
#include <memory>
#include <string>

#include "trustgate/agents/agent.hpp"

namespace trustgate::agents {

enum class MaState { Spawned, AtCsp, Returning, Destroyed };

std::string_view to_string(MaState state);

// One request's courier. It lives on the CSP host from arrival until it
// either migrates back with the result or rejects and destroys itself.
class MobileAgent : public Agent {
public:
    MobileAgent(protocol::MobileAgentState state, AgentContext ctx);

    // Called by the host right after attachment.
    void arrive(simnet::Network& net);

    MaState state() const { return state_; }
    const protocol::MobileAgentState& carried() const { return carried_; }
    int service_calls() const { return service_calls_; }

    void on_timer(std::uint64_t token, simnet::Network& net) override;

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

    // Test doubles override this to call the service without asking the
    // domain trust agent.
    virtual bool gates_domain() const { return true; }

private:
    void call_service(simnet::Network& net);
    void give_up(simnet::Network& net, protocol::RejectReason reason);
    void destroy(simnet::Network& net);

    protocol::MobileAgentState carried_;
    MaState state_ = MaState::Spawned;
    bool domain_cleared_ = false;
    int service_calls_ = 0;
};

// Agent platform at the CSP site. Instantiates a mobile agent for each
// distinct MigrateOut and detaches it once it is destroyed.
class CspHost : public Agent {
public:
    explicit CspHost(AgentContext ctx);

    const MobileAgent* agent(std::uint64_t ma_id) const;
    std::size_t hosted() const { return agents_.size(); }

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

    virtual std::unique_ptr<MobileAgent> make_agent(protocol::MobileAgentState state);

private:
    // Destroyed agents stay here, detached, so no handler ever outlives its
    // object.
    std::map<std::uint64_t, std::unique_ptr<MobileAgent>> agents_;
};

} // namespace trustgate::agents
