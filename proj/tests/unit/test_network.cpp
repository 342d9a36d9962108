#include <catch_amalgamated.hpp>

#include "trustgate/error.hpp"
#include "trustgate/protocol/codec.hpp"
#include "trustgate/simnet/network.hpp"

using namespace trustgate;
using namespace trustgate::simnet;
using protocol::EventKind;

namespace {

struct Sink : Endpoint {
    std::vector<std::pair<std::uint64_t, Bytes>> received;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> timers;

    void on_deliver(std::span<const std::uint8_t> bytes, Network& net) override {
        received.emplace_back(net.now(), Bytes(bytes.begin(), bytes.end()));
    }
    void on_timer(std::uint64_t token, Network& net) override { timers.emplace_back(net.now(), token); }
};

protocol::Envelope ping(Network& net, std::uint64_t req = 1) {
    protocol::Envelope e;
    e.seq = net.next_envelope_seq();
    e.req_id = req;
    e.sender = "a";
    e.receiver = "b";
    e.body = protocol::AuthResult{req};
    return e;
}

std::size_t count(const protocol::Trace& t, EventKind kind) {
    std::size_t n = 0;
    for (const auto& ev : t.events) n += ev.event == kind;
    return n;
}

} // namespace

TEST_CASE("zero-fault delivery happens once at now + latency_min") {
    FaultPlan plan;
    plan.latency_min = plan.latency_max = 3;
    Network net(plan);
    Sink a, b;
    net.attach("a", &a);
    net.attach("b", &b);
    const auto e = ping(net);
    net.send(e);
    const auto& trace = net.run_until_quiescent(100);

    REQUIRE(b.received.size() == 1);
    CHECK(b.received[0].first == 3);
    CHECK(protocol::decode(b.received[0].second) == e);
    REQUIRE(trace.events.size() == 2);
    CHECK(trace.events[0].event == EventKind::Sent);
    CHECK(trace.events[1].event == EventKind::Delivered);
    CHECK(trace.events[1].time == 3);
    CHECK(net.stats().delivered == 1);
}

TEST_CASE("drop probability one loses every envelope") {
    FaultPlan plan;
    plan.drop_prob = 1.0;
    Network net(plan);
    Sink a, b;
    net.attach("a", &a);
    net.attach("b", &b);
    for (int i = 0; i < 10; ++i) net.send(ping(net));
    const auto& trace = net.run_until_quiescent(100);
    CHECK(b.received.empty());
    CHECK(count(trace, EventKind::Dropped) == 10);
}

TEST_CASE("dup probability one delivers two identical copies") {
    FaultPlan plan;
    plan.dup_prob = 1.0;
    Network net(plan);
    Sink a, b;
    net.attach("a", &a);
    net.attach("b", &b);
    net.send(ping(net));
    const auto& trace = net.run_until_quiescent(100);
    REQUIRE(b.received.size() == 2);
    CHECK(b.received[0].second == b.received[1].second);
    CHECK(trace.events.back().copy == 1);
}

TEST_CASE("tampering changes the body but not the header") {
    FaultPlan plan;
    plan.tamper_prob = 1.0;
    Network net(plan);
    Sink a, b;
    net.attach("a", &a);
    net.attach("b", &b);
    const auto e = ping(net);
    net.send(e);
    const auto& trace = net.run_until_quiescent(100);
    REQUIRE(b.received.size() == 1);
    const auto original = protocol::encode(e);
    CHECK(b.received[0].second != original);
    CHECK(protocol::peek_sender(b.received[0].second) == std::optional<std::string>("a"));
    CHECK(trace.events.back().fault == "tamper");
}

TEST_CASE("unknown endpoints are refused and detached ones are unroutable") {
    Network net(FaultPlan{});
    Sink a, b;
    net.attach("a", &a);
    auto e = ping(net);
    try {
        net.send(e);
        FAIL("send to an unknown endpoint succeeded");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::UnknownEndpoint);
    }
    CHECK(net.trace().events.empty());

    net.attach("b", &b);
    net.send(e);
    net.detach("b");
    const auto& trace = net.run_until_quiescent(100);
    CHECK(b.received.empty());
    CHECK(trace.events.back().fault == "unroutable");
}

TEST_CASE("empty network quiesces with an empty trace") {
    Network net(FaultPlan{});
    CHECK(net.run_until_quiescent(100).events.empty());
}

TEST_CASE("timers fire in time order, ties in scheduling order") {
    Network net(FaultPlan{});
    Sink a;
    net.attach("a", &a);
    net.schedule_timer("a", 5, 1);
    net.schedule_timer("a", 2, 2);
    net.schedule_timer("a", 5, 3);
    net.run_until_quiescent(100);
    using P = std::pair<std::uint64_t, std::uint64_t>;
    CHECK(a.timers == std::vector<P>{{2, 2}, {5, 1}, {5, 3}});
}

TEST_CASE("events past max_time stay queued and are flagged") {
    Network net(FaultPlan{});
    Sink a;
    net.attach("a", &a);
    net.schedule_timer("a", 50, 1);
    const auto& trace = net.run_until_quiescent(10);
    CHECK(a.timers.empty());
    CHECK(trace.max_time_exceeded());
}

TEST_CASE("same seed and plan give the same trace") {
    FaultPlan plan;
    plan.seed = 17;
    plan.drop_prob = 0.3;
    plan.dup_prob = 0.3;
    plan.tamper_prob = 0.3;
    plan.latency_max = 5;
    auto once = [&] {
        Network net(plan);
        Sink a, b;
        net.attach("a", &a);
        net.attach("b", &b);
        for (std::uint64_t i = 0; i < 50; ++i) net.send(ping(net, i));
        return protocol::to_jsonl(net.run_until_quiescent(1000));
    };
    CHECK(once() == once());
}

TEST_CASE("fault plans are validated") {
    FaultPlan plan;
    plan.drop_prob = 1.5;
    CHECK_THROWS_AS(Network(plan), Error);
    plan = FaultPlan{};
    plan.latency_min = 4;
    plan.latency_max = 2;
    CHECK_THROWS_AS(Network(plan), Error);
}
