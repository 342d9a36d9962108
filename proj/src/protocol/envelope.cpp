#include "trustgate/protocol/envelope.hpp"

#include <array>

namespace trustgate::protocol {

namespace {

constexpr std::array<std::string_view, kMsgTypeCount> kMsgTypeNames = {
    "AuthSubmit",  "AuthResult",    "TrustQueryUser", "TrustReplyUser", "MigrateOut",
    "DomainTrustQuery", "DomainTrustReply", "ServiceCall", "ServiceResult", "MigrateBack",
    "BreachNotice", "DeliverResult", "Reject",        "TrustUpdate",
};

constexpr std::array<std::string_view, 5> kRejectNames = {
    "AuthFailed", "UserGate", "DomainGate", "Timeout", "SessionExpired",
};

std::string assessment_text(const Assessment& a) {
    std::string s(trust::to_string(a.observed));
    if (a.breach_reported) s += ":breach";
    return s;
}

std::string verdict(bool trusted) { return trusted ? "trusted" : "not_trusted"; }

} // namespace

std::string_view to_string(MsgType t) {
    const auto i = static_cast<std::size_t>(t);
    if (i == 0 || i > kMsgTypeNames.size()) return "Unknown";
    return kMsgTypeNames[i - 1];
}

std::optional<MsgType> parse_msg_type(std::string_view name) {
    for (std::size_t i = 0; i < kMsgTypeNames.size(); ++i)
        if (kMsgTypeNames[i] == name) return static_cast<MsgType>(i + 1);
    return std::nullopt;
}

std::string_view to_string(RejectReason r) {
    const auto i = static_cast<std::size_t>(r);
    return i < kRejectNames.size() ? kRejectNames[i] : "Unknown";
}

std::optional<RejectReason> parse_reject_reason(std::string_view name) {
    for (std::size_t i = 0; i < kRejectNames.size(); ++i)
        if (kRejectNames[i] == name) return static_cast<RejectReason>(i);
    return std::nullopt;
}

std::string summarize(const Body& body) {
    if (auto* b = std::get_if<TrustReplyUser>(&body)) return verdict(b->trusted);
    if (auto* b = std::get_if<DomainTrustReply>(&body)) return verdict(b->trusted);
    if (auto* b = std::get_if<Reject>(&body)) return std::string(to_string(b->reason));
    if (auto* b = std::get_if<BreachNotice>(&body)) {
        return std::string(trust::to_string(b->severity)) +
               (b->source == NoticeSource::DomainTrustAgent ? ":dta" : ":proxy");
    }
    if (auto* b = std::get_if<ServiceResult>(&body)) return assessment_text(b->assessment);
    if (auto* b = std::get_if<MigrateBack>(&body)) return assessment_text(b->assessment);
    if (auto* b = std::get_if<TrustUpdate>(&body)) return assessment_text(b->assessment);
    return {};
}

} // namespace trustgate::protocol
