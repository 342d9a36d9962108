#pragma once

// Reference trust arithmetic for tests and the acceptance suite. Written
// out from scratch with its own parameter type so that it shares no code
// with the trust library it checks.

#include <cstdint>
#include <vector>

#include "trustgate/trust/model.hpp"

namespace trustgate::harness {

struct OracleParams {
    double alpha = 0.5;
    double initial = 0.5;
    double w_positive = 1.0;
    double w_wrong = 0.5;
    double w_malicious = 0.1;
    int level = 1;
    std::uint32_t removal_streak = 3;

    static OracleParams from(const trust::TrustParams& p);
};

// (1 - negatives/total) * weight^level, with the power taken by repeated
// multiplication.
double oracle_action_probability(std::uint64_t negatives, std::uint64_t total, double weight, int level);

// Trust value before any action followed by the value after each action.
// Actions after the user would have been removed are not applied.
std::vector<double> trust_oracle(const std::vector<trust::ActionKind>& actions, const OracleParams& params);

} // namespace trustgate::harness
