#include "trustgate/harness/metrics.hpp"

#include <set>

#include "json.hpp"

namespace trustgate::harness {

using protocol::EventKind;

Metrics compute_metrics(const protocol::Trace& trace, std::uint64_t scheduled) {
    Metrics m;
    m.scheduled = scheduled;
    for (const auto& ev : trace.events) {
        if (ev.event == EventKind::Delivered && ev.fault.empty()) ++m.envelopes_delivered;
        if (ev.event != EventKind::Note) continue;

        if (ev.note == protocol::note::kDtaReport && ev.detail.ends_with(":breach")) ++m.breaches_detected;
        if (ev.note == protocol::note::kUserRemoved) ++m.users_removed;
        if (ev.note != protocol::note::kRequestDone) continue;

        const auto& d = ev.detail;
        if (d == "granted")
            ++m.granted;
        else if (d == "rejected:AuthFailed")
            ++m.rejected_auth;
        else if (d == "rejected:UserGate")
            ++m.rejected_user_gate;
        else if (d == "rejected:DomainGate")
            ++m.rejected_domain_gate;
        else if (d == "rejected:Timeout" || d == "rejected:SessionExpired")
            ++m.rejected_timeout;
        else if (d == "timeout")
            ++m.timeouts;
    }
    return m;
}

Metrics compute_metrics(const protocol::Trace& trace) {
    std::set<std::uint64_t> submitted;
    for (const auto& ev : trace.events)
        if (ev.event == EventKind::Sent && ev.msg_type == protocol::MsgType::AuthSubmit) submitted.insert(ev.req_id);
    return compute_metrics(trace, submitted.size());
}

std::string to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["scheduled"] = m.scheduled;
    j["granted"] = m.granted;
    j["rejected_auth"] = m.rejected_auth;
    j["rejected_user_gate"] = m.rejected_user_gate;
    j["rejected_domain_gate"] = m.rejected_domain_gate;
    j["rejected_timeout"] = m.rejected_timeout;
    j["timeouts"] = m.timeouts;
    j["breaches_detected"] = m.breaches_detected;
    j["users_removed"] = m.users_removed;
    j["envelopes_delivered"] = m.envelopes_delivered;
    j["trust_series"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.trust_series) j["trust_series"][k] = v;
    return j.dump(2) + "\n";
}

} // namespace trustgate::harness
