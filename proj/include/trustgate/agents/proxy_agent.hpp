#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trustgate/agents/agent.hpp"
#include "trustgate/agents/directory.hpp"

namespace trustgate::agents {

struct AuditEntry {
    std::uint64_t time = 0;
    std::uint64_t req_id = 0;
    std::string principal;
    std::string event;
    std::string detail;

    bool operator==(const AuditEntry&) const = default;
};

std::string to_jsonl(const std::vector<AuditEntry>& log);

// Entry point of a domain: authenticates users, asks the domain's trust user
// agent about them, launches one mobile agent per admitted request and
// routes the result back.
class ProxyAgent : public Agent {
public:
    ProxyAgent(std::string domain, DomainDirectory& directory, AgentContext ctx);

    const std::string& domain() const { return domain_; }
    const std::vector<AuditEntry>& audit_log() const { return audit_; }

    // Drops the session of an in-flight request; its result will be
    // discarded on return.
    void expire_session(std::uint64_t req_id);
    bool has_session(std::uint64_t req_id) const;

    void on_timer(std::uint64_t token, simnet::Network& net) override;

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

    // Test doubles override this to launch the mobile agent without asking
    // the trust user agent.
    virtual bool gates_users() const { return true; }

private:
    enum class Phase { AwaitUser, AwaitAgent, Closed };

    struct Session {
        protocol::PrincipalId principal;
        protocol::ServiceRequest request;
        std::string interface;
        Phase phase = Phase::AwaitUser;
        bool expired = false;
    };

    void on_auth(const protocol::Envelope& envelope, const protocol::AuthSubmit& msg, simnet::Network& net);
    void on_user_reply(Session& s, std::uint64_t req_id, bool trusted, simnet::Network& net);
    void on_return(Session& s, const protocol::Envelope& envelope, const protocol::MigrateBack& msg,
                   simnet::Network& net);
    void on_agent_reject(Session& s, std::uint64_t req_id, protocol::RejectReason reason, simnet::Network& net);
    void spawn(Session& s, std::uint64_t req_id, simnet::Network& net);
    void reject(Session& s, std::uint64_t req_id, protocol::RejectReason reason, simnet::Network& net);
    void audit(const simnet::Network& net, std::uint64_t req_id, const std::string& principal, std::string event,
               std::string detail = {});

    std::string domain_;
    DomainDirectory& directory_;
    std::string tua_;
    std::map<std::uint64_t, Session> sessions_;
    std::vector<AuditEntry> audit_;
};

} // namespace trustgate::agents
