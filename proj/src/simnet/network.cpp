#include "trustgate/simnet/network.hpp"

#include "trustgate/error.hpp"
#include "trustgate/protocol/codec.hpp"

namespace trustgate::simnet {

using protocol::EventKind;
using protocol::TraceEvent;

void FaultPlan::validate() const {
    auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!unit(drop_prob) || !unit(dup_prob) || !unit(tamper_prob))
        throw Error(Errc::InvalidArgument, "fault probabilities must lie in [0, 1]");
    if (latency_min > latency_max) throw Error(Errc::InvalidArgument, "latency_min exceeds latency_max");
}

Network::Network(FaultPlan plan) : plan_(plan), rng_(plan.seed) { plan_.validate(); }

void Network::attach(const std::string& id, Endpoint* endpoint) { endpoints_[id] = endpoint; }

void Network::detach(const std::string& id) {
    if (auto it = endpoints_.find(id); it != endpoints_.end()) it->second = nullptr;
}

bool Network::attached(const std::string& id) const {
    auto it = endpoints_.find(id);
    return it != endpoints_.end() && it->second != nullptr;
}

double Network::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::uint64_t Network::latency() {
    const auto span = plan_.latency_max - plan_.latency_min + 1;
    return plan_.latency_min + rng_() % span;
}

void Network::record(TraceEvent ev) {
    ev.seq = trace_.events.size() + 1;
    trace_.events.push_back(std::move(ev));
}

void Network::send(const protocol::Envelope& envelope) {
    for (const auto* id : {&envelope.sender, &envelope.receiver})
        if (!endpoints_.contains(*id)) throw Error(Errc::UnknownEndpoint, "endpoint '" + *id + "' was never attached");

    TraceEvent summary;
    summary.msg_type = envelope.type();
    summary.from = envelope.sender;
    summary.to = envelope.receiver;
    summary.req_id = envelope.req_id;
    summary.env = envelope.seq;
    summary.detail = protocol::summarize(envelope.body);

    TraceEvent sent = summary;
    sent.event = EventKind::Sent;
    sent.time = now_;
    sent.cycle = cycle_;
    record(sent);
    ++stats_.sent;

    // Draw order is fixed: drop, dup, then per copy tamper + latency.
    const bool drop = uniform() < plan_.drop_prob;
    const bool dup = uniform() < plan_.dup_prob;
    if (drop) {
        TraceEvent dropped = summary;
        dropped.event = EventKind::Dropped;
        dropped.time = now_;
        dropped.cycle = cycle_;
        dropped.fault = std::string(protocol::fault::kDrop);
        record(dropped);
        ++stats_.dropped;
        return;
    }

    const Bytes wire = protocol::encode(envelope);
    const int copies = dup ? 2 : 1;
    if (dup) ++stats_.duplicated;
    for (int copy = 0; copy < copies; ++copy) {
        Item item;
        item.kind = ItemKind::Delivery;
        item.target = envelope.receiver;
        item.bytes = wire;
        item.summary = summary;
        item.summary.copy = static_cast<std::uint32_t>(copy);
        if (uniform() < plan_.tamper_prob) {
            const auto region = protocol::body_region(item.bytes);
            const auto index = region.offset + rng_() % region.length;
            const auto mask = static_cast<std::uint8_t>(1 + rng_() % 255);
            item.bytes[index] ^= mask;
            item.summary.fault = std::string(protocol::fault::kTamper);
            ++stats_.tampered;
        }
        item.time = now_ + latency();
        item.order = ++order_;
        queue_.push(std::move(item));
    }
}

void Network::schedule_timer(const std::string& endpoint, std::uint64_t delay, std::uint64_t token) {
    if (!endpoints_.contains(endpoint))
        throw Error(Errc::UnknownEndpoint, "endpoint '" + endpoint + "' was never attached");
    Item item;
    item.kind = ItemKind::Timer;
    item.target = endpoint;
    item.token = token;
    item.time = now_ + delay;
    item.order = ++order_;
    queue_.push(std::move(item));
}

void Network::note(std::string_view from, std::uint64_t req_id, std::string_view what, std::string detail) {
    TraceEvent ev;
    ev.event = EventKind::Note;
    ev.from = std::string(from);
    ev.req_id = req_id;
    ev.time = now_;
    ev.cycle = cycle_;
    ev.note = std::string(what);
    ev.detail = std::move(detail);
    record(std::move(ev));
}

const protocol::Trace& Network::run_until_quiescent(std::uint64_t max_time) {
    while (!queue_.empty()) {
        if (queue_.top().time > max_time) {
            note("simnet", 0, protocol::note::kMaxTimeExceeded, std::to_string(max_time));
            break;
        }
        Item item = queue_.top();
        queue_.pop();
        now_ = item.time;
        ++cycle_;

        auto it = endpoints_.find(item.target);
        Endpoint* target = it == endpoints_.end() ? nullptr : it->second;

        if (item.kind == ItemKind::Timer) {
            if (target) target->on_timer(item.token, *this);
            continue;
        }

        TraceEvent ev = item.summary;
        ev.time = now_;
        ev.cycle = cycle_;
        if (!target) {
            ev.event = EventKind::Dropped;
            ev.fault = std::string(protocol::fault::kUnroutable);
            record(std::move(ev));
            ++stats_.dropped;
            continue;
        }
        ev.event = EventKind::Delivered;
        record(std::move(ev));
        ++stats_.delivered;
        target->on_deliver(item.bytes, *this);
    }
    return trace_;
}

} // namespace trustgate::simnet
