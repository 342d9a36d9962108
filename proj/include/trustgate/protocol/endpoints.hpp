#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "trustgate/protocol/envelope.hpp"

namespace trustgate::protocol::endpoints {

inline constexpr std::string_view kDomainTrustAgent = "dta";
inline constexpr std::string_view kCspService = "csp";
// Agent platform at the CSP site that hosts arriving mobile agents.
inline constexpr std::string_view kCspHost = "csp-host";

inline std::string interface_agent(const PrincipalId& p) { return "ia/" + p.key(); }
inline std::string proxy(std::string_view domain) { return "proxy/" + std::string(domain); }
inline std::string trust_user_agent(std::string_view domain) { return "tua/" + std::string(domain); }
inline std::string mobile_agent(std::uint64_t ma_id) { return "ma/" + std::to_string(ma_id); }

inline bool is_interface_agent(std::string_view ep) { return ep.starts_with("ia/"); }
inline bool is_mobile_agent(std::string_view ep) { return ep.starts_with("ma/"); }
inline bool is_proxy(std::string_view ep) { return ep.starts_with("proxy/"); }

} // namespace trustgate::protocol::endpoints
