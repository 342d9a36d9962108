#include "trustgate/agents/test_doubles.hpp"

namespace trustgate::agents {

std::string_view to_string(FaultyAgent f) {
    switch (f) {
        case FaultyAgent::ProxySkipsUserGate: return "proxy_skips_user_gate";
        case FaultyAgent::MaSkipsDomainGate: return "ma_skips_domain_gate";
        case FaultyAgent::DtaSuppressesBreach: return "dta_suppresses_breach";
    }
    return "?";
}

std::optional<FaultyAgent> parse_faulty_agent(std::string_view name) {
    for (auto f : {FaultyAgent::ProxySkipsUserGate, FaultyAgent::MaSkipsDomainGate, FaultyAgent::DtaSuppressesBreach})
        if (to_string(f) == name) return f;
    return std::nullopt;
}

} // namespace trustgate::agents
