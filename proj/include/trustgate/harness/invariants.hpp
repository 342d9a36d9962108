#pragma once

// Security and transport properties checked over a finished trace. Each
// check reads only the trace, so a stored trace replays to the same
// findings.

#include <cstdint>
#include <string>
#include <vector>

#include "trustgate/protocol/trace.hpp"

namespace trustgate::harness {

struct Violation {
    std::string property;
    std::uint64_t seq = 0;
    std::uint64_t req_id = 0;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> check_user_gate(const protocol::Trace& trace);
std::vector<Violation> check_domain_gate(const protocol::Trace& trace);
std::vector<Violation> check_agent_lifecycle(const protocol::Trace& trace);
std::vector<Violation> check_breach_immediacy(const protocol::Trace& trace);
std::vector<Violation> check_removal_permanence(const protocol::Trace& trace);
std::vector<Violation> check_causality(const protocol::Trace& trace);
// Skipped when the run stopped at max_time.
std::vector<Violation> check_conservation(const protocol::Trace& trace);

// All of the above, in that order.
std::vector<Violation> check_invariants(const protocol::Trace& trace);

} // namespace trustgate::harness
