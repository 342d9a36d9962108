#include "trustgate/harness/generator.hpp"

#include <random>

namespace trustgate::harness {

Scenario random_scenario(std::uint64_t seed, const GeneratorOptions& options) {
    std::mt19937_64 rng(derive_seed(seed, 0x6e6));
    auto below = [&](std::uint64_t n) { return rng() % n; };
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto pick = [&](std::initializer_list<double> xs) { return *(xs.begin() + below(xs.size())); };

    Scenario s;
    s.name = "random-" + std::to_string(seed);
    s.seed = seed;
    s.params.smoothing_alpha = pick({0.2, 0.5, 0.8});
    s.params.level = static_cast<int>(1 + below(3));
    s.params.user_threshold = pick({0.0, 0.3, 0.5, 0.7});
    s.params.removal_streak = static_cast<std::uint32_t>(1 + below(4));
    s.catalog = {{"files", "file-listing"}, {"mail", "inbox"}, {"compute", "job-accepted"}};

    const auto domains = 1 + below(options.max_domains);
    for (std::size_t d = 0; d < domains; ++d)
        s.domains.push_back(DomainSpec{"d" + std::to_string(d), pick({0.0, 0.2, 0.4, 0.5})});

    const auto users = 1 + below(options.max_users);
    for (std::size_t u = 0; u < users; ++u) {
        UserSpec spec;
        spec.id = "u" + std::to_string(u);
        spec.domain = s.domains[below(domains)].id;
        spec.password = "pw-" + std::to_string(rng() % 100000);
        switch (below(3)) {
            case 0: spec.profile = BehaviorProfile{ProfileKind::Honest, 0, 0, 0}; break;
            case 1: spec.profile = BehaviorProfile{ProfileKind::Sloppy, unit() * 0.5, 0, 0}; break;
            default:
                spec.profile = BehaviorProfile{ProfileKind::Attacker, 0, 0.3 + 0.7 * unit(),
                                               static_cast<std::uint32_t>(below(4))};
        }
        s.users.push_back(spec);
    }

    const char* services[] = {"files", "mail", "compute", "missing"};
    std::size_t remaining = below(options.max_requests + 1);
    while (remaining > 0) {
        const auto& user = s.users[below(users)];
        RequestSpec r;
        r.user = user.id;
        r.domain = user.domain;
        r.at = below(200);
        r.service = services[below(4)];
        r.repeat = static_cast<std::uint32_t>(1 + below(std::min<std::size_t>(remaining, 5)));
        r.interval = r.repeat > 1 ? 5 + below(60) : 0;
        // Occasional failed login.
        if (below(12) == 0) r.password = "not-" + user.password;
        remaining -= r.repeat;
        s.requests.push_back(r);
    }

    if (options.faults) {
        s.faults.drop_prob = unit() * 0.15;
        s.faults.dup_prob = unit() * 0.15;
        s.faults.tamper_prob = unit() * 0.1;
        s.faults.latency_min = 1;
        s.faults.latency_max = 1 + below(3);
    }
    return s;
}

} // namespace trustgate::harness
