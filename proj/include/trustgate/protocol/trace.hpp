#pragma once

// Ordered log of every network event of one simulation, exported as UTF-8
// JSON-lines. Every line carries the same keys in the same order:
//
//   seq, event, msg_type, from, to, req_id, env, time, cycle, copy, fault,
//   detail, note
//
// `event` is Sent, Delivered, Dropped or Note. Note events record facts local
// to an agent (mobile agent lifecycle, monitoring reports, removals, request
// completion) and have an empty msg_type.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/protocol/envelope.hpp"

namespace trustgate::protocol {

enum class EventKind : std::uint8_t { Sent, Delivered, Dropped, Note };

std::string_view to_string(EventKind kind);

namespace fault {
inline constexpr std::string_view kNone = "";
inline constexpr std::string_view kDrop = "drop";
inline constexpr std::string_view kTamper = "tamper";
inline constexpr std::string_view kUnroutable = "unroutable";
} // namespace fault

namespace note {
inline constexpr std::string_view kMaSpawn = "ma_spawn";
inline constexpr std::string_view kMaArrive = "ma_arrive";
inline constexpr std::string_view kMaDestroy = "ma_destroy";
inline constexpr std::string_view kMaLost = "ma_lost";
inline constexpr std::string_view kDtaReport = "dta_report";
inline constexpr std::string_view kUserRemoved = "user_removed";
inline constexpr std::string_view kRequestDone = "request_done";
inline constexpr std::string_view kSealViolation = "seal_violation";
inline constexpr std::string_view kSessionExpired = "session_expired";
inline constexpr std::string_view kMaxTimeExceeded = "max_time_exceeded";
} // namespace note

struct TraceEvent {
    std::uint64_t seq = 0;
    EventKind event = EventKind::Sent;
    std::optional<MsgType> msg_type;
    std::string from;
    std::string to;
    std::uint64_t req_id = 0;
    // Envelope sequence number; 0 for notes.
    std::uint64_t env = 0;
    std::uint64_t time = 0;
    // Index of the simulation event (delivery or timer) being processed.
    std::uint64_t cycle = 0;
    // 0 for the original transmission, 1 for a duplicate injected by the network.
    std::uint32_t copy = 0;
    std::string fault;
    std::string detail;
    std::string note;

    bool operator==(const TraceEvent&) const = default;
};

struct Trace {
    std::vector<TraceEvent> events;

    bool max_time_exceeded() const;
    bool operator==(const Trace&) const = default;
};

std::string to_json_line(const TraceEvent& event);
std::string to_jsonl(const Trace& trace);

// Strict parser: unknown or missing keys, wrong types, unknown enum names and
// non-increasing seq all raise Error(MalformedTrace).
Trace parse_jsonl(std::string_view text);

} // namespace trustgate::protocol
