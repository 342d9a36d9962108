#include "trustgate/protocol/trace.hpp"

#include <array>
#include <sstream>

#include "json.hpp"
#include "trustgate/error.hpp"

namespace trustgate::protocol {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 13> kKeys = {
    "seq", "event", "msg_type", "from", "to", "req_id", "env", "time", "cycle", "copy", "fault", "detail", "note",
};

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
    throw Error(Errc::MalformedTrace, "line " + std::to_string(line) + ": " + why);
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    if (s == "Sent") return EventKind::Sent;
    if (s == "Delivered") return EventKind::Delivered;
    if (s == "Dropped") return EventKind::Dropped;
    if (s == "Note") return EventKind::Note;
    return std::nullopt;
}

std::uint64_t get_uint(const ordered_json& j, const char* key, std::size_t line) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) malformed(line, std::string("'") + key + "' must be an unsigned integer");
    return v.get<std::uint64_t>();
}

std::string get_str(const ordered_json& j, const char* key, std::size_t line) {
    const auto& v = j.at(key);
    if (!v.is_string()) malformed(line, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

TraceEvent parse_line(const std::string& text, std::size_t line) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(line, e.what());
    }
    if (!j.is_object()) malformed(line, "not a JSON object");
    if (j.size() != kKeys.size()) malformed(line, "expected exactly " + std::to_string(kKeys.size()) + " keys");
    for (auto key : kKeys)
        if (!j.contains(std::string(key))) malformed(line, "missing key '" + std::string(key) + "'");

    TraceEvent ev;
    ev.seq = get_uint(j, "seq", line);
    const auto kind = parse_event_kind(get_str(j, "event", line));
    if (!kind) malformed(line, "unknown event kind");
    ev.event = *kind;
    const auto type = get_str(j, "msg_type", line);
    if (ev.event == EventKind::Note) {
        if (!type.empty()) malformed(line, "note events carry no msg_type");
    } else {
        ev.msg_type = parse_msg_type(type);
        if (!ev.msg_type) malformed(line, "unknown msg_type '" + type + "'");
    }
    ev.from = get_str(j, "from", line);
    ev.to = get_str(j, "to", line);
    ev.req_id = get_uint(j, "req_id", line);
    ev.env = get_uint(j, "env", line);
    ev.time = get_uint(j, "time", line);
    ev.cycle = get_uint(j, "cycle", line);
    const auto copy = get_uint(j, "copy", line);
    if (copy > 1) malformed(line, "copy must be 0 or 1");
    ev.copy = static_cast<std::uint32_t>(copy);
    ev.fault = get_str(j, "fault", line);
    if (ev.fault != fault::kNone && ev.fault != fault::kDrop && ev.fault != fault::kTamper &&
        ev.fault != fault::kUnroutable)
        malformed(line, "unknown fault '" + ev.fault + "'");
    ev.detail = get_str(j, "detail", line);
    ev.note = get_str(j, "note", line);
    if ((ev.event == EventKind::Note) == ev.note.empty()) malformed(line, "note is required exactly on Note events");
    return ev;
}

} // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Sent: return "Sent";
        case EventKind::Delivered: return "Delivered";
        case EventKind::Dropped: return "Dropped";
        case EventKind::Note: return "Note";
    }
    return "Unknown";
}

bool Trace::max_time_exceeded() const {
    for (const auto& e : events)
        if (e.event == EventKind::Note && e.note == note::kMaxTimeExceeded) return true;
    return false;
}

std::string to_json_line(const TraceEvent& ev) {
    ordered_json j;
    j["seq"] = ev.seq;
    j["event"] = std::string(to_string(ev.event));
    j["msg_type"] = ev.msg_type ? std::string(to_string(*ev.msg_type)) : std::string();
    j["from"] = ev.from;
    j["to"] = ev.to;
    j["req_id"] = ev.req_id;
    j["env"] = ev.env;
    j["time"] = ev.time;
    j["cycle"] = ev.cycle;
    j["copy"] = ev.copy;
    j["fault"] = ev.fault;
    j["detail"] = ev.detail;
    j["note"] = ev.note;
    return j.dump();
}

std::string to_jsonl(const Trace& trace) {
    std::string out;
    for (const auto& ev : trace.events) {
        out += to_json_line(ev);
        out += '\n';
    }
    return out;
}

Trace parse_jsonl(std::string_view text) {
    Trace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto ev = parse_line(line, line_no);
        if (!trace.events.empty() && ev.seq <= trace.events.back().seq)
            malformed(line_no, "seq not strictly increasing");
        trace.events.push_back(std::move(ev));
    }
    return trace;
}

} // namespace trustgate::protocol
