#pragma once

#include <cstdint>

#include "trustgate/harness/scenario.hpp"

namespace trustgate::harness {

struct GeneratorOptions {
    std::size_t max_users = 10;
    std::size_t max_requests = 50;
    std::size_t max_domains = 3;
    // Adds drop, duplication, tamper and latency jitter.
    bool faults = false;
};

// Deterministic random scenario for property runs. Every draw comes from
// `seed`, which also becomes the scenario seed.
Scenario random_scenario(std::uint64_t seed, const GeneratorOptions& options = {});

} // namespace trustgate::harness
