#include "trustgate/protocol/conformance.hpp"

#include <map>
#include <set>

#include "trustgate/error.hpp"
#include "trustgate/protocol/endpoints.hpp"

namespace trustgate::protocol {

namespace {

struct Lifecycle {
    std::set<MsgType> delivered;
    bool user_trusted = false;
    bool user_not_trusted = false;
    bool domain_trusted = false;
    bool domain_not_trusted = false;
    bool ma_domain_reject = false;
    std::uint64_t terminal_env = 0;
    std::uint64_t last_seq = 0;
    bool faulted = false;
    std::set<std::uint64_t> seen_env;
    LifecycleVerdict verdict;

    bool has(MsgType t) const { return delivered.contains(t); }
};

// Returns an empty string when the delivery is allowed, else the reason.
std::string check_delivery(const Lifecycle& life, const TraceEvent& ev) {
    const auto type = *ev.msg_type;
    auto need = [&](MsgType pred) -> std::string {
        return life.has(pred) ? std::string() : std::string("precedes ") + std::string(to_string(pred));
    };

    if (type != MsgType::AuthSubmit && !life.has(MsgType::AuthSubmit)) return "delivered before AuthSubmit";

    switch (type) {
        case MsgType::AuthSubmit:
            return life.delivered.empty() ? std::string() : "AuthSubmit is not the first delivery";
        case MsgType::AuthResult:
        case MsgType::TrustQueryUser: return {};
        case MsgType::TrustReplyUser: return need(MsgType::TrustQueryUser);
        case MsgType::MigrateOut:
            if (life.user_not_trusted) return "mobile agent launched after a not_trusted user reply";
            if (!life.user_trusted) return "precedes a trusted TrustReplyUser";
            return {};
        case MsgType::DomainTrustQuery: return need(MsgType::MigrateOut);
        case MsgType::DomainTrustReply: return need(MsgType::DomainTrustQuery);
        case MsgType::ServiceCall:
            if (life.domain_not_trusted) return "service called after a not_trusted domain reply";
            if (!life.domain_trusted) return "precedes a trusted DomainTrustReply";
            return {};
        case MsgType::ServiceResult: return need(MsgType::ServiceCall);
        case MsgType::MigrateBack: return need(MsgType::ServiceResult);
        case MsgType::DeliverResult:
        case MsgType::TrustUpdate: return need(MsgType::MigrateBack);
        case MsgType::BreachNotice:
            if (ev.detail.ends_with(":proxy"))
                return life.ma_domain_reject ? std::string() : "proxy notice without a domain rejection";
            return need(MsgType::ServiceCall);
        case MsgType::Reject: {
            const auto reason = parse_reject_reason(ev.detail);
            if (endpoints::is_mobile_agent(ev.from)) {
                if (!life.has(MsgType::MigrateOut)) return "precedes MigrateOut";
                if (reason == RejectReason::DomainGate && !life.domain_not_trusted)
                    return "domain rejection without a not_trusted DomainTrustReply";
                return {};
            }
            if (reason == RejectReason::UserGate && !life.user_not_trusted)
                return "user-gate rejection without a not_trusted TrustReplyUser";
            if (reason == RejectReason::DomainGate && !life.ma_domain_reject)
                return "domain rejection not reported by the mobile agent";
            return {};
        }
    }
    return "unknown message type";
}

void apply_delivery(Lifecycle& life, const TraceEvent& ev) {
    const auto type = *ev.msg_type;
    life.delivered.insert(type);
    if (type == MsgType::TrustReplyUser) (ev.detail == "trusted" ? life.user_trusted : life.user_not_trusted) = true;
    if (type == MsgType::DomainTrustReply)
        (ev.detail == "trusted" ? life.domain_trusted : life.domain_not_trusted) = true;
    if (type == MsgType::Reject && endpoints::is_mobile_agent(ev.from) && ev.detail == "DomainGate")
        life.ma_domain_reject = true;
}

bool is_terminal(const TraceEvent& ev) {
    return endpoints::is_interface_agent(ev.to) &&
           (ev.msg_type == MsgType::DeliverResult || ev.msg_type == MsgType::Reject);
}

void flag(Lifecycle& life, const TraceEvent& ev, std::string reason) {
    life.verdict.conformant = false;
    life.verdict.offending_seq = ev.seq;
    life.verdict.offending_msg = ev.msg_type ? std::string(to_string(*ev.msg_type)) : ev.note;
    life.verdict.reason = std::move(reason);
}

void require_complete(const Trace& trace) {
    if (trace.max_time_exceeded()) throw Error(Errc::IncompleteTrace, "simulation stopped at max_time");
    std::map<std::uint64_t, int> outstanding;
    for (const auto& ev : trace.events) {
        if (ev.event == EventKind::Sent) ++outstanding[ev.env];
        if (ev.copy == 1 && (ev.event == EventKind::Delivered || ev.event == EventKind::Dropped)) ++outstanding[ev.env];
        if (ev.event == EventKind::Delivered || ev.event == EventKind::Dropped) --outstanding[ev.env];
    }
    for (const auto& [env, n] : outstanding)
        if (n > 0)
            throw Error(Errc::IncompleteTrace, "envelope " + std::to_string(env) + " sent but never delivered or dropped");
}

} // namespace

std::vector<LifecycleVerdict> check_conformance(const Trace& trace) {
    require_complete(trace);

    std::map<std::uint64_t, Lifecycle> lives;
    for (const auto& ev : trace.events) {
        if (ev.req_id == 0 || ev.event == EventKind::Note) continue;
        auto& life = lives[ev.req_id];
        life.verdict.req_id = ev.req_id;
        life.last_seq = ev.seq;

        if (ev.event == EventKind::Dropped || ev.fault == fault::kTamper) life.faulted = true;
        if (ev.event != EventKind::Delivered || ev.fault == fault::kTamper) continue;
        if (!life.seen_env.insert(ev.env).second) continue;
        if (!life.verdict.conformant) continue;

        if (is_terminal(ev)) {
            if (life.terminal_env != 0) {
                flag(life, ev, "second terminal delivery to the interface agent");
                continue;
            }
            life.terminal_env = ev.env;
        }
        if (auto reason = check_delivery(life, ev); !reason.empty()) {
            flag(life, ev, std::string(to_string(*ev.msg_type)) + " " + reason);
            continue;
        }
        apply_delivery(life, ev);
    }

    std::vector<LifecycleVerdict> out;
    out.reserve(lives.size());
    for (auto& [req, life] : lives) {
        if (life.verdict.conformant && life.terminal_env == 0 && !life.faulted) {
            life.verdict.conformant = false;
            life.verdict.offending_seq = life.last_seq;
            life.verdict.reason = "lifecycle never reached the interface agent";
        }
        out.push_back(life.verdict);
    }
    return out;
}

bool all_conformant(const std::vector<LifecycleVerdict>& verdicts) {
    for (const auto& v : verdicts)
        if (!v.conformant) return false;
    return true;
}

} // namespace trustgate::protocol
