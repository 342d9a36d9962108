#include "trustgate/agents/trust_agents.hpp"

#include "trustgate/error.hpp"
#include "trustgate/protocol/endpoints.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::agents {

namespace ep = protocol::endpoints;

TrustUserAgent::TrustUserAgent(std::string domain, DomainDirectory& directory, AgentContext ctx)
    : Agent(ep::trust_user_agent(domain), ctx),
      domain_(std::move(domain)),
      directory_(directory),
      proxy_(ep::proxy(domain_)) {}

trust::PrincipalRecord& TrustUserAgent::record(const std::string& user_id) {
    const bool fresh = db_.find(user_id) == nullptr;
    auto& rec = db_.touch(user_id, params());
    if (fresh) series_[user_id].push_back(rec.state.value);
    return rec;
}

const std::vector<double>& TrustUserAgent::series(const std::string& user_id) const {
    static const std::vector<double> kEmpty;
    auto it = series_.find(user_id);
    return it == series_.end() ? kEmpty : it->second;
}

bool TrustUserAgent::check(const std::string& user_id) {
    const auto& rec = record(user_id);
    if (rec.state.removed || !directory_.is_member(user_id)) return false;
    return rec.state.value >= params().user_threshold;
}

bool TrustUserAgent::apply(simnet::Network& net, std::uint64_t req_id, const std::string& user_id,
                           trust::ActionKind kind) {
    if (applied_.contains(req_id)) return false;
    if (db_.find(user_id) == nullptr && !directory_.is_member(user_id)) {
        dropped_.push_back(user_id + "@" + domain_);
        return false;
    }
    applied_.insert(req_id);
    auto& rec = record(user_id);
    if (rec.state.removed) return false;

    const auto obs = trust::observe(rec, kind, params());
    series_[user_id].push_back(obs.after);
    if (obs.removed_now) {
        directory_.remove(user_id);
        net.note(id(), req_id, protocol::note::kUserRemoved, user_id + "@" + domain_);
    }
    return true;
}

void TrustUserAgent::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    if (auto* q = std::get_if<protocol::TrustQueryUser>(&envelope.body)) {
        if (envelope.sender != proxy_ || q->principal.domain_id != domain_) return;
        const bool trusted = check(q->principal.user_id);
        emit(net, proxy_, envelope.req_id, protocol::TrustReplyUser{q->principal, trusted});
        return;
    }
    if (auto* n = std::get_if<protocol::BreachNotice>(&envelope.body)) {
        const bool from_dta = envelope.sender == ep::kDomainTrustAgent &&
                              n->source == protocol::NoticeSource::DomainTrustAgent;
        const bool from_proxy = envelope.sender == proxy_ && n->source == protocol::NoticeSource::Proxy;
        if ((!from_dta && !from_proxy) || n->principal.domain_id != domain_) return;
        apply(net, envelope.req_id, n->principal.user_id, n->severity);
        return;
    }
    if (auto* u = std::get_if<protocol::TrustUpdate>(&envelope.body)) {
        if (envelope.sender != proxy_ || u->principal.domain_id != domain_) return;
        // A reported breach reaches this agent as its own notice.
        if (u->assessment.breach_reported) return;
        apply(net, envelope.req_id, u->principal.user_id, u->assessment.observed);
    }
}

DomainTrustAgent::DomainTrustAgent(std::map<std::string, double> thresholds, AgentContext ctx)
    : Agent(std::string(ep::kDomainTrustAgent), ctx) {
    for (const auto& [domain, t] : thresholds) set_threshold(domain, t);
}

void DomainTrustAgent::set_threshold(const std::string& domain, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw Error(Errc::InvalidThresholds, "domain threshold for " + domain + " must lie in [0,1]");
    thresholds_[domain] = threshold;
}

double DomainTrustAgent::threshold(const std::string& domain) {
    return thresholds_.try_emplace(domain, kDefaultThreshold).first->second;
}

trust::PrincipalRecord& DomainTrustAgent::record(const std::string& domain) {
    threshold(domain);
    return db_.touch(domain, params());
}

bool DomainTrustAgent::check(const std::string& domain) {
    return record(domain).state.value >= threshold(domain);
}

protocol::Assessment DomainTrustAgent::report(simnet::Network& net, std::uint64_t req_id,
                                              const protocol::PrincipalId& principal, trust::ActionKind outcome) {
    auto& rec = record(principal.domain_id);
    trust::observe(rec, outcome, params(), std::nullopt, trust::Removal::Skip);

    const bool breach = outcome == trust::ActionKind::Malicious || rec.state.value < threshold(principal.domain_id);
    net.note(id(), req_id, protocol::note::kDtaReport,
             std::string(trust::to_string(outcome)) + (breach ? ":breach" : ":none"));

    protocol::Assessment assessment{outcome, false};
    if (breach && sends_notices()) {
        const auto severity = outcome == trust::ActionKind::Malicious ? trust::ActionKind::Malicious
                                                                      : trust::ActionKind::Wrong;
        emit(net, ep::trust_user_agent(principal.domain_id), req_id,
             protocol::BreachNotice{principal, severity, protocol::NoticeSource::DomainTrustAgent});
        assessment.breach_reported = true;
    }
    return assessment;
}

void DomainTrustAgent::handle(const protocol::Envelope& envelope, simnet::Network& net) {
    auto* q = std::get_if<protocol::DomainTrustQuery>(&envelope.body);
    if (!q || !ep::is_mobile_agent(envelope.sender) || q->ma_id != envelope.req_id) return;
    emit(net, envelope.sender, envelope.req_id,
         protocol::DomainTrustReply{q->principal, check(q->principal.domain_id)});
}

} // namespace trustgate::agents
