#pragma once

// Checks every request lifecycle in a trace against the message order of the
// request protocol:
//
//   AuthSubmit -> AuthResult, TrustQueryUser -> TrustReplyUser
//     -> (Reject | MigrateOut) -> DomainTrustQuery -> DomainTrustReply
//     -> (Reject + BreachNotice | ServiceCall -> ServiceResult -> MigrateBack)
//     -> DeliverResult, TrustUpdate
//
// Each accepted delivery must have its protocol predecessor delivered earlier
// in the same lifecycle. Messages a single handler emits together
// (AuthResult/TrustQueryUser, DeliverResult/TrustUpdate, Reject/BreachNotice)
// are not ordered against each other. Timeouts may end a lifecycle with a
// Reject at any point after AuthSubmit. Tampered deliveries are ignored since
// the receiver discards them, and duplicate copies count once.

#include <cstdint>
#include <string>
#include <vector>

#include "trustgate/protocol/trace.hpp"

namespace trustgate::protocol {

struct LifecycleVerdict {
    std::uint64_t req_id = 0;
    bool conformant = true;
    // Trace seq of the earliest offending event when not conformant.
    std::uint64_t offending_seq = 0;
    std::string offending_msg;
    std::string reason;

    bool operator==(const LifecycleVerdict&) const = default;
};

// One verdict per req_id, ascending. Throws Error(IncompleteTrace) when an
// envelope was sent but never delivered or dropped, or the run hit max_time.
std::vector<LifecycleVerdict> check_conformance(const Trace& trace);

bool all_conformant(const std::vector<LifecycleVerdict>& verdicts);

} // namespace trustgate::protocol
