#include "trustgate/harness/simulation.hpp"

#include <set>

#include "trustgate/agents/test_doubles.hpp"
#include "trustgate/protocol/endpoints.hpp"

namespace trustgate::harness {

namespace ep = protocol::endpoints;
using agents::FaultyAgent;

namespace {

Scenario validated(Scenario s) {
    if (auto diags = validate(s); !diags.empty()) throw ScenarioError(std::move(diags));
    return s;
}

} // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(validated(std::move(scenario))), schedule_(expand_schedule(scenario_)), keys_(scenario_.seed) {
    auto plan = scenario_.faults;
    plan.seed = scenario_.seed;
    net_ = std::make_unique<simnet::Network>(plan);

    agents::AgentContext ctx;
    ctx.keys = &keys_;
    ctx.params = scenario_.params;
    ctx.timeouts = agents::Timeouts::from_gate(scenario_.gate_timeout);

    const auto faulty = scenario_.faulty_agent;
    for (const auto& d : scenario_.domains) {
        DomainSite site;
        site.directory = std::make_unique<agents::DomainDirectory>(d.id);
        if (faulty == FaultyAgent::ProxySkipsUserGate)
            site.proxy = std::make_unique<agents::ProxySkipsUserGate>(d.id, *site.directory, ctx);
        else
            site.proxy = std::make_unique<agents::ProxyAgent>(d.id, *site.directory, ctx);
        site.tua = std::make_unique<agents::TrustUserAgent>(d.id, *site.directory, ctx);
        net_->attach(site.proxy->id(), site.proxy.get());
        net_->attach(site.tua->id(), site.tua.get());
        domains_.emplace(d.id, std::move(site));
    }

    std::map<std::string, double> thresholds;
    for (const auto& d : scenario_.domains) thresholds[d.id] = d.threshold;
    if (faulty == FaultyAgent::DtaSuppressesBreach)
        dta_ = std::make_unique<agents::DtaSuppressesBreach>(thresholds, ctx);
    else
        dta_ = std::make_unique<agents::DomainTrustAgent>(thresholds, ctx);
    csp_ = std::make_unique<agents::CspService>(scenario_.catalog, *dta_, ctx);
    if (faulty == FaultyAgent::MaSkipsDomainGate)
        host_ = std::make_unique<agents::HostOfUngatedAgents>(ctx);
    else
        host_ = std::make_unique<agents::CspHost>(ctx);
    net_->attach(dta_->id(), dta_.get());
    net_->attach(csp_->id(), csp_.get());
    net_->attach(host_->id(), host_.get());

    for (const auto& u : scenario_.users) {
        auto& site = domains_.at(u.domain);
        site.directory->enroll(u.id, u.password);
        agents::Credentials creds{protocol::PrincipalId{u.id, u.domain}, u.password};
        auto ia = std::make_unique<agents::InterfaceAgent>(creds, site.proxy->id(), ctx);
        net_->attach(ia->id(), ia.get());
        interfaces_.emplace(u.key(), std::move(ia));
    }
}

const protocol::Trace& Simulation::run() {
    for (const auto& r : schedule_) {
        const auto& user = scenario_.users[r.user_index];
        std::optional<std::string> password;
        if (r.password != user.password) password = r.password;
        interfaces_.at(user.key())->plan(*net_, r.req_id, r.at, protocol::ServiceRequest{r.service, r.conduct},
                                         password);
    }
    return net_->run_until_quiescent(effective_max_time(scenario_, schedule_));
}

std::map<std::string, std::vector<double>> Simulation::trust_series() const {
    std::map<std::string, std::vector<double>> out;
    for (const auto& [domain, site] : domains_)
        for (const auto& [user, series] : site.tua->all_series()) out[user + "@" + domain] = series;
    return out;
}

Verdict judge(const protocol::Trace& trace) {
    Verdict v;
    try {
        v.lifecycles = protocol::check_conformance(trace);
    } catch (const Error& e) {
        if (e.code() != Errc::IncompleteTrace) throw;
        v.incomplete = e.what();
    }
    v.violations = check_invariants(trace);
    return v;
}

RunResult run_scenario(const Scenario& scenario) {
    Simulation sim(scenario);
    RunResult out;
    out.trace = sim.run();
    out.metrics = compute_metrics(out.trace, sim.schedule().size());
    out.metrics.trust_series = sim.trust_series();
    out.verdict = judge(out.trace);
    for (const auto& d : scenario.domains) out.audit[d.id] = sim.proxy(d.id).audit_log();
    return out;
}

std::map<std::string, std::vector<trust::ActionKind>> realized_actions(const protocol::Trace& trace) {
    std::map<std::uint64_t, std::string> owner;
    std::set<std::uint64_t> settled;
    std::map<std::string, std::vector<trust::ActionKind>> out;

    for (const auto& ev : trace.events) {
        if (ev.event == protocol::EventKind::Sent && ev.msg_type == protocol::MsgType::AuthSubmit &&
            ep::is_interface_agent(ev.from))
            owner.emplace(ev.req_id, ev.from.substr(3));
        if (ev.event != protocol::EventKind::Delivered || !ev.fault.empty() || !ev.to.starts_with("tua/")) continue;
        if (settled.contains(ev.req_id) || !owner.contains(ev.req_id)) continue;

        // detail is "Severity:source" for notices and "Kind" or "Kind:breach"
        // for updates.
        const auto colon = ev.detail.find(':');
        const auto kind = trust::parse_action_kind(ev.detail.substr(0, colon));
        if (!kind) continue;
        if (ev.msg_type == protocol::MsgType::TrustUpdate && colon != std::string::npos) continue;
        if (ev.msg_type != protocol::MsgType::TrustUpdate && ev.msg_type != protocol::MsgType::BreachNotice) continue;
        settled.insert(ev.req_id);
        out[owner.at(ev.req_id)].push_back(*kind);
    }
    return out;
}

} // namespace trustgate::harness
