#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "trustgate/agents/csp_service.hpp"
#include "trustgate/agents/interface_agent.hpp"
#include "trustgate/agents/mobile_agent.hpp"
#include "trustgate/agents/proxy_agent.hpp"
#include "trustgate/agents/trust_agents.hpp"
#include "trustgate/harness/invariants.hpp"
#include "trustgate/harness/metrics.hpp"
#include "trustgate/harness/scenario.hpp"
#include "trustgate/protocol/conformance.hpp"

namespace trustgate::harness {

// The full topology of one scenario wired onto one network: a directory,
// proxy and trust user agent per domain, an interface agent per user, and
// the CSP site (host, service, domain trust agent).
class Simulation {
public:
    explicit Simulation(Scenario scenario);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // Plans every scheduled request and runs to quiescence.
    const protocol::Trace& run();

    simnet::Network& network() { return *net_; }
    const Scenario& scenario() const { return scenario_; }
    const std::vector<ScheduledRequest>& schedule() const { return schedule_; }

    agents::ProxyAgent& proxy(const std::string& domain) { return *domains_.at(domain).proxy; }
    agents::TrustUserAgent& tua(const std::string& domain) { return *domains_.at(domain).tua; }
    agents::DomainDirectory& directory(const std::string& domain) { return *domains_.at(domain).directory; }
    agents::InterfaceAgent& interface(const std::string& principal_key) { return *interfaces_.at(principal_key); }
    agents::DomainTrustAgent& dta() { return *dta_; }
    agents::CspService& csp() { return *csp_; }
    agents::CspHost& host() { return *host_; }

    // Trust series recorded by each domain's trust user agent, by principal.
    std::map<std::string, std::vector<double>> trust_series() const;

private:
    struct DomainSite {
        std::unique_ptr<agents::DomainDirectory> directory;
        std::unique_ptr<agents::ProxyAgent> proxy;
        std::unique_ptr<agents::TrustUserAgent> tua;
    };

    Scenario scenario_;
    std::vector<ScheduledRequest> schedule_;
    protocol::KeyRing keys_;
    std::unique_ptr<simnet::Network> net_;
    std::map<std::string, DomainSite> domains_;
    std::map<std::string, std::unique_ptr<agents::InterfaceAgent>> interfaces_;
    std::unique_ptr<agents::DomainTrustAgent> dta_;
    std::unique_ptr<agents::CspService> csp_;
    std::unique_ptr<agents::CspHost> host_;
};

struct Verdict {
    std::vector<protocol::LifecycleVerdict> lifecycles;
    std::vector<Violation> violations;
    // Non-empty when the trace could not be judged: the run stopped at
    // max_time or an envelope was left in flight.
    std::string incomplete;

    bool conformant() const { return incomplete.empty() && protocol::all_conformant(lifecycles); }
    bool ok() const { return conformant() && violations.empty(); }
};

// Conformance plus trace invariants; everything is read from the trace.
Verdict judge(const protocol::Trace& trace);

struct RunResult {
    protocol::Trace trace;
    Metrics metrics;
    Verdict verdict;
    std::map<std::string, std::vector<agents::AuditEntry>> audit;
};

RunResult run_scenario(const Scenario& scenario);

// Actions each trust user agent should have recorded, by principal, read
// from the accepted deliveries in the trace: the first breach notice of a
// request, or its trust update when no breach was reported.
std::map<std::string, std::vector<trust::ActionKind>> realized_actions(const protocol::Trace& trace);

} // namespace trustgate::harness
