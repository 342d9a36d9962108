#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trustgate/protocol/trace.hpp"

namespace trustgate::harness {

struct Metrics {
    std::uint64_t scheduled = 0;
    std::uint64_t granted = 0;
    std::uint64_t rejected_auth = 0;
    std::uint64_t rejected_user_gate = 0;
    std::uint64_t rejected_domain_gate = 0;
    // Rejections issued by an agent whose wait expired, plus expired sessions.
    std::uint64_t rejected_timeout = 0;
    // Requests the interface agent gave up on without any answer.
    std::uint64_t timeouts = 0;
    std::uint64_t breaches_detected = 0;
    std::uint64_t users_removed = 0;
    std::uint64_t envelopes_delivered = 0;
    // Per principal ("user@domain"); empty when computed from a trace alone.
    std::map<std::string, std::vector<double>> trust_series;

    std::uint64_t rejections() const {
        return rejected_auth + rejected_user_gate + rejected_domain_gate + rejected_timeout;
    }
    // granted + rejections + timeouts == scheduled
    bool conserved() const { return granted + rejections() + timeouts == scheduled; }

    bool operator==(const Metrics&) const = default;
};

// Counts outcomes from request_done notes. `scheduled` is taken from the
// number of distinct requests the trace shows being submitted when not
// given.
Metrics compute_metrics(const protocol::Trace& trace, std::uint64_t scheduled);
Metrics compute_metrics(const protocol::Trace& trace);

std::string to_json(const Metrics& metrics);

} // namespace trustgate::harness
