#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "trustgate/trust/model.hpp"

namespace trustgate::harness {

enum class ProfileKind { Honest, Sloppy, Attacker };

std::string_view to_string(ProfileKind kind);

struct BehaviorProfile {
    ProfileKind kind = ProfileKind::Honest;
    // Sloppy: probability of a Wrong action.
    double p = 0.0;
    // Attacker: probability of a Malicious action once warmed up.
    double q = 0.0;
    // Attacker: number of leading honest requests.
    std::uint32_t warmup = 0;

    bool operator==(const BehaviorProfile&) const = default;
};

// Deterministic in (profile, seed, n).
std::vector<trust::ActionKind> generate_behavior(const BehaviorProfile& profile, std::uint64_t seed, std::size_t n);

// Stable per-user seed derived from the scenario seed.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream);

} // namespace trustgate::harness
