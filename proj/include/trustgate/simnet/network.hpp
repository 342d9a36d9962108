#pragma once

// Deterministic discrete-event transport between agent endpoints.
//
// Time is an integer. Deliveries and timers sit in one queue ordered by
// (time, scheduling order), so simultaneous events run in the order they
// were scheduled. Faults are drawn from a seeded generator in a fixed order
// per send, which makes (scenario, seed) reproduce the same trace bytes.

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/bytes.hpp"
#include "trustgate/protocol/envelope.hpp"
#include "trustgate/protocol/trace.hpp"

namespace trustgate::simnet {

struct FaultPlan {
    std::uint64_t seed = 0;
    double drop_prob = 0.0;
    double dup_prob = 0.0;
    double tamper_prob = 0.0;
    std::uint64_t latency_min = 1;
    std::uint64_t latency_max = 1;

    // Throws Error(InvalidArgument).
    void validate() const;
    bool zero_fault() const { return drop_prob == 0.0 && dup_prob == 0.0 && tamper_prob == 0.0; }

    bool operator==(const FaultPlan&) const = default;
};

class Network;

class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual void on_deliver(std::span<const std::uint8_t> bytes, Network& net) = 0;
    virtual void on_timer(std::uint64_t token, Network& net) {
        (void)token;
        (void)net;
    }
};

struct NetworkStats {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t duplicated = 0;
    std::uint64_t tampered = 0;
};

class Network {
public:
    explicit Network(FaultPlan plan);

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    // Non-owning; the endpoint must outlive its attachment.
    void attach(const std::string& id, Endpoint* endpoint);
    // Later deliveries to a detached endpoint are dropped as unroutable.
    void detach(const std::string& id);
    bool attached(const std::string& id) const;

    std::uint64_t next_envelope_seq() { return ++envelope_seq_; }

    // Encodes and schedules the envelope. Throws Error(UnknownEndpoint) when
    // either side was never attached.
    void send(const protocol::Envelope& envelope);

    void schedule_timer(const std::string& endpoint, std::uint64_t delay, std::uint64_t token);

    // Records an agent-local fact in the trace.
    void note(std::string_view from, std::uint64_t req_id, std::string_view what, std::string detail = {});

    // Processes events until the queue drains or the next event lies beyond
    // max_time; the latter is flagged with a max_time_exceeded note.
    const protocol::Trace& run_until_quiescent(std::uint64_t max_time);

    std::uint64_t now() const { return now_; }
    std::uint64_t cycle() const { return cycle_; }
    const protocol::Trace& trace() const { return trace_; }
    const NetworkStats& stats() const { return stats_; }
    const FaultPlan& plan() const { return plan_; }

private:
    enum class ItemKind : std::uint8_t { Delivery, Timer };

    struct Item {
        std::uint64_t time = 0;
        std::uint64_t order = 0;
        ItemKind kind = ItemKind::Delivery;
        std::string target;
        std::uint64_t token = 0;
        Bytes bytes;
        protocol::TraceEvent summary;
    };

    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            return a.time != b.time ? a.time > b.time : a.order > b.order;
        }
    };

    double uniform();
    std::uint64_t latency();
    void record(protocol::TraceEvent ev);

    FaultPlan plan_;
    std::mt19937_64 rng_;
    std::map<std::string, Endpoint*, std::less<>> endpoints_;
    std::priority_queue<Item, std::vector<Item>, Later> queue_;
    protocol::Trace trace_;
    NetworkStats stats_;
    std::uint64_t now_ = 0;
    std::uint64_t cycle_ = 0;
    std::uint64_t order_ = 0;
    std::uint64_t envelope_seq_ = 0;
};

} // namespace trustgate::simnet
