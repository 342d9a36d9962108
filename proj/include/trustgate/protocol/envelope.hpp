#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "trustgate/trust/model.hpp"

namespace trustgate::protocol {

// Wire values are frozen; never renumber.
enum class MsgType : std::uint8_t {
    AuthSubmit = 1,
    AuthResult = 2,
    TrustQueryUser = 3,
    TrustReplyUser = 4,
    MigrateOut = 5,
    DomainTrustQuery = 6,
    DomainTrustReply = 7,
    ServiceCall = 8,
    ServiceResult = 9,
    MigrateBack = 10,
    BreachNotice = 11,
    DeliverResult = 12,
    Reject = 13,
    TrustUpdate = 14,
};

inline constexpr std::uint8_t kMsgTypeCount = 14;

std::string_view to_string(MsgType t);
std::optional<MsgType> parse_msg_type(std::string_view name);

struct PrincipalId {
    std::string user_id;
    std::string domain_id;

    // "user@domain"; unique per scenario.
    std::string key() const { return user_id + "@" + domain_id; }
    bool valid() const { return !user_id.empty() && !domain_id.empty(); }

    auto operator<=>(const PrincipalId&) const = default;
};

// What the user asks of the CSP. `conduct` is the scripted ground truth of
// how the user behaves with the service; the CSP monitor observes it.
struct ServiceRequest {
    std::string service_key;
    trust::ActionKind conduct = trust::ActionKind::Positive;

    bool operator==(const ServiceRequest&) const = default;
};

struct MobileAgentState {
    std::uint64_t ma_id = 0;
    PrincipalId principal;
    std::string origin_proxy;
    std::uint64_t session_id = 0;
    ServiceRequest request;

    bool operator==(const MobileAgentState&) const = default;
};

enum class RejectReason : std::uint8_t {
    AuthFailed = 0,
    UserGate = 1,
    DomainGate = 2,
    Timeout = 3,
    SessionExpired = 4,
};

std::string_view to_string(RejectReason r);
std::optional<RejectReason> parse_reject_reason(std::string_view name);

struct AuthSubmit {
    PrincipalId principal;
    std::string password;
    ServiceRequest request;
    bool operator==(const AuthSubmit&) const = default;
};

struct AuthResult {
    std::uint64_t session_id = 0;
    bool operator==(const AuthResult&) const = default;
};

struct TrustQueryUser {
    PrincipalId principal;
    bool operator==(const TrustQueryUser&) const = default;
};

struct TrustReplyUser {
    PrincipalId principal;
    bool trusted = false;
    bool operator==(const TrustReplyUser&) const = default;
};

struct MigrateOut {
    MobileAgentState agent;
    bool operator==(const MigrateOut&) const = default;
};

struct DomainTrustQuery {
    PrincipalId principal;
    std::uint64_t ma_id = 0;
    bool operator==(const DomainTrustQuery&) const = default;
};

struct DomainTrustReply {
    PrincipalId principal;
    bool trusted = false;
    bool operator==(const DomainTrustReply&) const = default;
};

struct ServiceCall {
    PrincipalId principal;
    ServiceRequest request;
    bool user_trusted = false;
    bool domain_trusted = false;
    bool operator==(const ServiceCall&) const = default;
};

// Outcome assessment made by the domain trust agent while the request was
// served; carried back so the user's trust agent records exactly one action.
struct Assessment {
    trust::ActionKind observed = trust::ActionKind::Positive;
    bool breach_reported = false;
    bool operator==(const Assessment&) const = default;
};

struct ServiceResult {
    std::string result;
    Assessment assessment;
    bool operator==(const ServiceResult&) const = default;
};

struct MigrateBack {
    MobileAgentState agent;
    std::string result;
    Assessment assessment;
    bool operator==(const MigrateBack&) const = default;
};

enum class NoticeSource : std::uint8_t { DomainTrustAgent = 0, Proxy = 1 };

struct BreachNotice {
    PrincipalId principal;
    trust::ActionKind severity = trust::ActionKind::Malicious;
    NoticeSource source = NoticeSource::DomainTrustAgent;
    bool operator==(const BreachNotice&) const = default;
};

struct DeliverResult {
    std::string result;
    bool operator==(const DeliverResult&) const = default;
};

struct Reject {
    RejectReason reason = RejectReason::AuthFailed;
    bool operator==(const Reject&) const = default;
};

struct TrustUpdate {
    PrincipalId principal;
    Assessment assessment;
    bool operator==(const TrustUpdate&) const = default;
};

// Alternative index + 1 == MsgType value, so the type can never disagree
// with the body shape.
using Body = std::variant<AuthSubmit, AuthResult, TrustQueryUser, TrustReplyUser, MigrateOut, DomainTrustQuery,
                          DomainTrustReply, ServiceCall, ServiceResult, MigrateBack, BreachNotice, DeliverResult,
                          Reject, TrustUpdate>;

inline constexpr std::size_t kSealSize = 32;
using Seal = std::array<std::uint8_t, kSealSize>;

struct Envelope {
    std::uint64_t seq = 0;
    std::uint64_t req_id = 0;
    // 0 selects the link key of (sender, receiver); otherwise a session key.
    std::uint64_t key_id = 0;
    std::string sender;
    std::string receiver;
    Body body;
    Seal seal{};

    MsgType type() const { return static_cast<MsgType>(body.index() + 1); }

    bool operator==(const Envelope&) const = default;
};

// Short, wire-independent description of the body used in traces: the gate
// verdict for replies, the reason for rejects, the severity for notices.
std::string summarize(const Body& body);

} // namespace trustgate::protocol
