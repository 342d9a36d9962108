#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trustgate/agents/agent.hpp"
#include "trustgate/agents/directory.hpp"
#include "trustgate/trust/database.hpp"

namespace trustgate::agents {

// Keeps the trust record of every user of one domain, answers the proxy's
// gate queries and removes users that keep misbehaving.
class TrustUserAgent : public Agent {
public:
    TrustUserAgent(std::string domain, DomainDirectory& directory, AgentContext ctx);

    // True iff the user is a member and its trust is at least user_threshold.
    // Unknown users are registered at the initial trust value.
    bool check(const std::string& user_id);

    // Records one action for the user unless this request already produced
    // one. Returns false when nothing was recorded.
    bool apply(simnet::Network& net, std::uint64_t req_id, const std::string& user_id, trust::ActionKind kind);

    const trust::TrustDatabase& database() const { return db_; }
    // Trust value after registration and after every recorded action.
    const std::vector<double>& series(const std::string& user_id) const;
    const std::map<std::string, std::vector<double>>& all_series() const { return series_; }
    const std::string& domain() const { return domain_; }
    // Notices and updates dropped because they named an unknown user.
    const std::vector<std::string>& dropped() const { return dropped_; }

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

private:
    trust::PrincipalRecord& record(const std::string& user_id);

    std::string domain_;
    DomainDirectory& directory_;
    std::string proxy_;
    trust::TrustDatabase db_;
    std::map<std::string, std::vector<double>> series_;
    std::set<std::uint64_t> applied_;
    std::vector<std::string> dropped_;
};

// CSP-side agent holding one trust record per user domain. It gates mobile
// agents at the domain tier and receives the service monitor's reports.
class DomainTrustAgent : public Agent {
public:
    DomainTrustAgent(std::map<std::string, double> thresholds, AgentContext ctx);

    // Throws InvalidThresholds for a value outside [0,1].
    void set_threshold(const std::string& domain, double threshold);
    double threshold(const std::string& domain);
    const std::map<std::string, double>& thresholds() const { return thresholds_; }

    // True iff the domain's trust is at least that domain's threshold.
    bool check(const std::string& domain);

    // Records the outcome of a served request against the user's domain and
    // notifies the domain's trust user agent, in the same event cycle, when
    // the outcome is malicious or the domain fell below its threshold.
    protocol::Assessment report(simnet::Network& net, std::uint64_t req_id, const protocol::PrincipalId& principal,
                                trust::ActionKind outcome);

    const trust::TrustDatabase& database() const { return db_; }

    static constexpr double kDefaultThreshold = 0.5;

protected:
    void handle(const protocol::Envelope& envelope, simnet::Network& net) override;

    // Test doubles override this to swallow breach notices.
    virtual bool sends_notices() const { return true; }

private:
    trust::PrincipalRecord& record(const std::string& domain);

    std::map<std::string, double> thresholds_;
    trust::TrustDatabase db_;
};

} // namespace trustgate::agents
