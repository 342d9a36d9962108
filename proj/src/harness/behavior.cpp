#include "trustgate/harness/behavior.hpp"

#include <random>

namespace trustgate::harness {

std::string_view to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::Honest: return "honest";
        case ProfileKind::Sloppy: return "sloppy";
        case ProfileKind::Attacker: return "attacker";
    }
    return "?";
}

std::vector<trust::ActionKind> generate_behavior(const BehaviorProfile& profile, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<trust::ActionKind> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // One draw per step regardless of profile keeps streams aligned.
        const double u = uniform();
        switch (profile.kind) {
            case ProfileKind::Honest: out.push_back(trust::ActionKind::Positive); break;
            case ProfileKind::Sloppy:
                out.push_back(u < profile.p ? trust::ActionKind::Wrong : trust::ActionKind::Positive);
                break;
            case ProfileKind::Attacker:
                out.push_back(i >= profile.warmup && u < profile.q ? trust::ActionKind::Malicious
                                                                    : trust::ActionKind::Positive);
                break;
        }
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream) {
    // splitmix64 finaliser over the combined value.
    std::uint64_t z = scenario_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace trustgate::harness
