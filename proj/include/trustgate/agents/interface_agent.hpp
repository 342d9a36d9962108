#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustgate/agents/agent.hpp"

namespace trustgate::agents {

struct Credentials {
    protocol::PrincipalId principal;
    std::string password;
};

enum class RequestOutcome {
    Granted,
    RejectedAuth,
    RejectedUserGate,
    RejectedDomainGate,
    RejectedTimeout,
    RejectedSessionExpired,
    // No terminal message reached the interface agent in time.
    TimedOut,
};

std::string_view to_string(RequestOutcome outcome);

struct CompletedRequest {
    std::uint64_t req_id = 0;
    RequestOutcome outcome = RequestOutcome::TimedOut;
    std::string result;
    std::uint64_t finished_at = 0;
};

// Runs on the user's device: submits one request at a time to the domain's
// proxy and shows whatever comes back.
class InterfaceAgent : public Agent {
public:
    InterfaceAgent(Credentials credentials, std::string proxy_endpoint, AgentContext ctx);

    // Sends AuthSubmit carrying the credentials and the request. Throws Busy
    // while a request is in flight and InvalidArgument for empty ids; neither
    // sends anything. `password` replaces the stored one for this request.
    void submit(simnet::Network& net, std::uint64_t req_id, protocol::ServiceRequest request,
                std::optional<std::string> password = std::nullopt);

    // Schedules a request to arrive at absolute time `at`. Arrivals while
    // busy wait in a FIFO backlog.
    void plan(simnet::Network& net, std::uint64_t req_id, std::uint64_t at, protocol::ServiceRequest request,
              std::optional<std::string> password = std::nullopt);

    std::optional<std::uint64_t> in_flight() const { return pending_ ? std::optional(pending_->req_id) : std::nullopt; }
    const std::vector<CompletedRequest>& completed() const { return completed_; }
    const protocol::PrincipalId& principal() const { return credentials_.principal; }

    // Inert profile data kept for audit only.
    const std::vector<std::string>& knowledge_base() const { return knowledge_base_; }

    void on_timer(std::uint64_t token, simnet::Network& net) override;

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

private:
    struct Pending {
        std::uint64_t req_id = 0;
        std::uint64_t session_id = 0;
    };

    void finish(simnet::Network& net, RequestOutcome outcome, std::string result);
    void drain_backlog(simnet::Network& net);

    Credentials credentials_;
    std::string proxy_;
    std::optional<Pending> pending_;
    struct Job {
        std::uint64_t req_id = 0;
        protocol::ServiceRequest request;
        std::optional<std::string> password;
    };

    std::map<std::uint64_t, Job> planned_;
    std::deque<Job> backlog_;
    std::vector<CompletedRequest> completed_;
    std::vector<std::string> knowledge_base_;
};

} // namespace trustgate::agents
