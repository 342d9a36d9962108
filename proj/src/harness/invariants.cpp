#include "trustgate/harness/invariants.hpp"

#include <map>
#include <set>

#include "trustgate/protocol/endpoints.hpp"

namespace trustgate::harness {

using protocol::EventKind;
using protocol::MsgType;
using protocol::TraceEvent;

namespace {

bool is(const TraceEvent& ev, EventKind kind, MsgType type) { return ev.event == kind && ev.msg_type == type; }

bool accepted(const TraceEvent& ev, MsgType type) { return is(ev, EventKind::Delivered, type) && ev.fault.empty(); }

bool is_note(const TraceEvent& ev, std::string_view what) { return ev.event == EventKind::Note && ev.note == what; }

void add(std::vector<Violation>& out, std::string_view property, const TraceEvent& ev, std::string detail) {
    out.push_back(Violation{std::string(property), ev.seq, ev.req_id, std::move(detail)});
}

// Shared shape of the two gate checks: `act` may only be sent after a
// trusted `reply` reached the asker and never after a not_trusted one.
std::vector<Violation> check_gate(const protocol::Trace& trace, std::string_view property, MsgType reply,
                                  MsgType act) {
    std::set<std::uint64_t> cleared;
    std::set<std::uint64_t> refused;
    std::vector<Violation> out;
    for (const auto& ev : trace.events) {
        if (is(ev, EventKind::Sent, reply) && ev.detail == "not_trusted") refused.insert(ev.req_id);
        if (accepted(ev, reply) && ev.detail == "trusted") cleared.insert(ev.req_id);
        if (!is(ev, EventKind::Sent, act)) continue;
        if (refused.contains(ev.req_id))
            add(out, property, ev,
                std::string(to_string(act)) + " sent after a not_trusted " + std::string(to_string(reply)));
        else if (!cleared.contains(ev.req_id))
            add(out, property, ev,
                std::string(to_string(act)) + " sent without a trusted " + std::string(to_string(reply)));
    }
    return out;
}

} // namespace

std::vector<Violation> check_user_gate(const protocol::Trace& trace) {
    return check_gate(trace, "user_gate", MsgType::TrustReplyUser, MsgType::MigrateOut);
}

std::vector<Violation> check_domain_gate(const protocol::Trace& trace) {
    return check_gate(trace, "domain_gate", MsgType::DomainTrustReply, MsgType::ServiceCall);
}

std::vector<Violation> check_agent_lifecycle(const protocol::Trace& trace) {
    struct Life {
        int spawns = 0;
        int outbound = 0;
        int returns = 0;
        bool ended = false;
        bool self_destroyed = false;
        const TraceEvent* spawn = nullptr;
    };
    std::map<std::uint64_t, Life> lives;
    std::vector<Violation> out;
    constexpr std::string_view kProp = "agent_lifecycle";

    for (const auto& ev : trace.events) {
        auto& life = lives[ev.req_id];
        if (is_note(ev, protocol::note::kMaSpawn)) {
            if (++life.spawns > 1) add(out, kProp, ev, "second mobile agent for one request");
            life.spawn = &ev;
        }
        if (is_note(ev, protocol::note::kMaDestroy) || is_note(ev, protocol::note::kMaLost)) life.ended = true;
        if (is_note(ev, protocol::note::kMaDestroy) && protocol::endpoints::is_mobile_agent(ev.from))
            life.self_destroyed = true;

        if (ev.event != EventKind::Sent) continue;
        if (ev.msg_type == MsgType::MigrateOut) {
            if (life.spawns == 0) add(out, kProp, ev, "MigrateOut without a spawned mobile agent");
            if (++life.outbound > 1) add(out, kProp, ev, "more than one outbound migration");
        }
        if (ev.msg_type == MsgType::MigrateBack && ++life.returns > 1)
            add(out, kProp, ev, "more than one return migration");
        if (life.self_destroyed && protocol::endpoints::is_mobile_agent(ev.from))
            add(out, kProp, ev, "mobile agent sent after destroying itself");
    }

    if (!trace.max_time_exceeded()) {
        for (const auto& [req, life] : lives)
            if (life.spawn && !life.ended) add(out, kProp, *life.spawn, "mobile agent never destroyed or lost");
    }
    return out;
}

std::vector<Violation> check_breach_immediacy(const protocol::Trace& trace) {
    std::map<std::pair<std::uint64_t, std::uint64_t>, int> notices;
    for (const auto& ev : trace.events)
        if (is(ev, EventKind::Sent, MsgType::BreachNotice) && ev.from == protocol::endpoints::kDomainTrustAgent)
            ++notices[{ev.req_id, ev.cycle}];

    std::vector<Violation> out;
    for (const auto& ev : trace.events) {
        if (!is_note(ev, protocol::note::kDtaReport)) continue;
        const bool breach = ev.detail.starts_with("Malicious") || ev.detail.ends_with(":breach");
        if (breach && !notices.contains({ev.req_id, ev.cycle}))
            add(out, "breach_immediacy", ev, "no BreachNotice sent in the cycle of the report");
    }
    return out;
}

std::vector<Violation> check_removal_permanence(const protocol::Trace& trace) {
    std::set<std::string> removed;
    std::set<std::uint64_t> seen;
    std::set<std::uint64_t> after_removal;
    std::vector<Violation> out;
    constexpr std::string_view kProp = "removal_permanence";

    for (const auto& ev : trace.events) {
        if (is_note(ev, protocol::note::kUserRemoved)) removed.insert("ia/" + ev.detail);
        if (accepted(ev, MsgType::AuthSubmit) && seen.insert(ev.req_id).second && removed.contains(ev.from))
            after_removal.insert(ev.req_id);
        if (ev.event != EventKind::Sent || !after_removal.contains(ev.req_id)) continue;
        if (ev.msg_type == MsgType::AuthResult || ev.msg_type == MsgType::TrustQueryUser ||
            ev.msg_type == MsgType::MigrateOut)
            add(out, kProp, ev, std::string(to_string(*ev.msg_type)) + " for a removed user");
        if (ev.msg_type == MsgType::Reject && protocol::endpoints::is_interface_agent(ev.to) &&
            ev.detail != "AuthFailed")
            add(out, kProp, ev, "removed user rejected with " + ev.detail + " instead of AuthFailed");
    }
    return out;
}

std::vector<Violation> check_causality(const protocol::Trace& trace) {
    std::map<std::uint64_t, std::uint64_t> sent_at;
    std::uint64_t last_time = 0;
    std::uint64_t last_seq = 0;
    std::vector<Violation> out;
    constexpr std::string_view kProp = "causality";

    for (const auto& ev : trace.events) {
        if (ev.seq <= last_seq && last_seq != 0) add(out, kProp, ev, "sequence number does not increase");
        if (ev.time < last_time) add(out, kProp, ev, "time decreased");
        last_seq = ev.seq;
        last_time = ev.time;

        if (ev.event == EventKind::Sent) {
            if (!sent_at.emplace(ev.env, ev.time).second) add(out, kProp, ev, "envelope sent twice");
            continue;
        }
        if (ev.event != EventKind::Delivered && ev.event != EventKind::Dropped) continue;
        auto it = sent_at.find(ev.env);
        if (it == sent_at.end())
            add(out, kProp, ev, "envelope " + std::to_string(ev.env) + " arrived before it was sent");
        else if (ev.time < it->second)
            add(out, kProp, ev, "delivered earlier than sent");
    }
    return out;
}

std::vector<Violation> check_conservation(const protocol::Trace& trace) {
    if (trace.max_time_exceeded()) return {};
    std::uint64_t sent = 0, delivered = 0, dropped = 0, duplicated = 0;
    for (const auto& ev : trace.events) {
        if (ev.event == EventKind::Sent) ++sent;
        if (ev.event == EventKind::Delivered) ++delivered;
        if (ev.event == EventKind::Dropped) ++dropped;
        if ((ev.event == EventKind::Delivered || ev.event == EventKind::Dropped) && ev.copy == 1) ++duplicated;
    }
    if (delivered + dropped == sent + duplicated) return {};
    return {Violation{"conservation", 0, 0,
                      "delivered " + std::to_string(delivered) + " + dropped " + std::to_string(dropped) +
                          " != sent " + std::to_string(sent) + " + duplicated " + std::to_string(duplicated)}};
}

std::vector<Violation> check_invariants(const protocol::Trace& trace) {
    std::vector<Violation> out;
    for (auto check : {check_user_gate, check_domain_gate, check_agent_lifecycle, check_breach_immediacy,
                       check_removal_permanence, check_causality, check_conservation}) {
        auto found = check(trace);
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

} // namespace trustgate::harness
