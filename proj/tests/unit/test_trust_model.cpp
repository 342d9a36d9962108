#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "trustgate/error.hpp"
#include "trustgate/harness/oracle.hpp"
#include "trustgate/trust/model.hpp"

using namespace trustgate;
using namespace trustgate::trust;
using Catch::Matchers::WithinAbs;

namespace {

TrustLedger ledger_of(std::initializer_list<ActionKind> kinds, const TrustParams& params = {}) {
    TrustLedger l;
    for (auto k : kinds) l = record_action(l, k, params);
    return l;
}

TrustLedger counts(std::uint64_t negatives, std::uint64_t total) {
    TrustLedger l;
    for (std::uint64_t i = 0; i < total; ++i)
        l = record_action(l, i < negatives ? ActionKind::Wrong : ActionKind::Positive, {});
    return l;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("action probability examples") {
    CHECK(action_probability(counts(0, 5), 1.0, 1) == 1.0);
    CHECK(action_probability(counts(5, 5), 1.0, 1) == 0.0);
    CHECK_THAT(action_probability(counts(2, 10), 0.5, 2), WithinAbs(0.2, 1e-15));
    CHECK(action_probability(counts(1, 4), 0.0, 3) == 0.0);
}

TEST_CASE("action probability rejects an empty ledger and bad weights") {
    CHECK(code_of([] { action_probability(TrustLedger{}, 0.5, 1); }) == Errc::EmptyLedger);
    CHECK(code_of([] { action_probability(counts(0, 1), 1.5, 1); }) == Errc::InvalidWeight);
    CHECK(code_of([] { action_probability(counts(0, 1), -0.1, 1); }) == Errc::InvalidWeight);
    CHECK(code_of([] { action_probability(0, 0, 0.5, 1); }) == Errc::EmptyLedger);
}

TEST_CASE("record action counts negatives") {
    auto l = record_action(TrustLedger{}, ActionKind::Positive, {});
    CHECK(l.negatives() == 0);
    CHECK(l.total() == 1);

    l = ledger_of({ActionKind::Malicious, ActionKind::Positive, ActionKind::Positive});
    REQUIRE(l.negatives() == 1);
    l = record_action(l, ActionKind::Malicious, {});
    CHECK(l.negatives() == 2);
    CHECK(l.total() == 4);

    l = record_action(ledger_of({ActionKind::Positive, ActionKind::Positive}), ActionKind::Wrong, {});
    CHECK(l.negatives() == 1);
    CHECK(l.total() == 3);
    CHECK(l.history().back().weight == 0.5);
}

TEST_CASE("record action enforces increasing seq") {
    auto l = record_action(TrustLedger{}, ActionKind::Positive, {}, 5);
    CHECK(l.history().back().seq == 5);
    CHECK(record_action(l, ActionKind::Positive, {}).history().back().seq == 6);
    CHECK(code_of([&] { record_action(l, ActionKind::Positive, {}, 5); }) == Errc::InvalidArgument);
}

TEST_CASE("ledger invariants hold over random action sequences") {
    testing::Rng rng(11);
    for (int round = 0; round < 500; ++round) {
        const auto params = testing::any_params(rng);
        TrustLedger l;
        std::uint64_t negatives = 0;
        const auto n = testing::below(rng, 40);
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto k = testing::any_kind(rng);
            negatives += k != ActionKind::Positive;
            l = record_action(l, k, params);
            REQUIRE(l.negatives() <= l.total());
            REQUIRE(l.negatives() == negatives);
            REQUIRE(l.total() == i + 1);
            REQUIRE(l.history().back().weight == params.weight_for(k));
        }
        REQUIRE(TrustLedger::from_history(l.history()) == l);
    }
}

TEST_CASE("from_history rejects broken histories") {
    CHECK(code_of([] { TrustLedger::from_history({{ActionKind::Positive, 1.0, 2}, {ActionKind::Positive, 1.0, 2}}); }) ==
          Errc::InvalidArgument);
    CHECK(code_of([] { TrustLedger::from_history({{ActionKind::Positive, 1.5, 1}}); }) == Errc::InvalidArgument);
}

TEST_CASE("update trust examples") {
    TrustParams p;
    TrustState s;
    s.value = 0.5;
    CHECK(update_trust(s, 0.5, ActionKind::Positive, p).value == 0.5);
    s.value = 1.0;
    CHECK(update_trust(s, 0.0, ActionKind::Positive, p).value == 0.5);
    p.smoothing_alpha = 0.25;
    s.value = 0.8;
    CHECK_THAT(update_trust(s, 0.2, ActionKind::Positive, p).value, WithinAbs(0.35, 1e-15));
}

TEST_CASE("update trust tracks the malicious streak and refuses removed principals") {
    TrustParams p;
    auto s = TrustState::initial(p);
    s = update_trust(s, 0.0, ActionKind::Malicious, p);
    s = update_trust(s, 0.0, ActionKind::Malicious, p);
    CHECK(s.malicious_streak == 2);
    CHECK_FALSE(should_remove(s, p));
    s = update_trust(s, 1.0, ActionKind::Positive, p);
    CHECK(s.malicious_streak == 0);
    s = update_trust(s, 0.0, ActionKind::Wrong, p);
    CHECK(s.malicious_streak == 0);

    auto gone = mark_removed(s);
    CHECK(gone.cls == TrustClass::NonTrusted);
    CHECK(code_of([&] { update_trust(gone, 0.5, ActionKind::Positive, p); }) == Errc::RemovedPrincipal);
    CHECK(code_of([&] { update_trust(s, 1.5, ActionKind::Positive, p); }) == Errc::InvalidArgument);
}

TEST_CASE("classification") {
    CHECK(classify(0.9, 0.7, 0.3) == TrustClass::Trusted);
    CHECK(classify(0.5, 0.7, 0.3) == TrustClass::Innocent);
    CHECK(classify(0.7, 0.7, 0.3) == TrustClass::Trusted);
    CHECK(classify(0.3, 0.7, 0.3) == TrustClass::Innocent);
    CHECK(classify(0.2999, 0.7, 0.3) == TrustClass::NonTrusted);
    CHECK(code_of([] { classify(0.5, 0.3, 0.3); }) == Errc::InvalidThresholds);
    CHECK(code_of([] { classify(0.5, 0.3, 0.7); }) == Errc::InvalidThresholds);
}

TEST_CASE("removal threshold") {
    TrustParams p;
    TrustState s;
    s.malicious_streak = 3;
    CHECK(should_remove(s, p));
    s.malicious_streak = 0;
    CHECK_FALSE(should_remove(s, p));
    s.malicious_streak = 2;
    CHECK_FALSE(should_remove(s, p));
}

TEST_CASE("parameter validation") {
    TrustParams p;
    CHECK_NOTHROW(p.validate());
    auto bad = p;
    bad.level = 0;
    CHECK(code_of([&] { bad.validate(); }) == Errc::InvalidParams);
    bad = p;
    bad.weight_wrong = 0.05;
    CHECK(code_of([&] { bad.validate(); }) == Errc::InvalidParams);
    bad = p;
    bad.removal_streak = 0;
    CHECK(code_of([&] { bad.validate(); }) == Errc::InvalidParams);
    bad = p;
    bad.smoothing_alpha = 1.2;
    CHECK(code_of([&] { bad.validate(); }) == Errc::InvalidParams);
}

TEST_CASE("first action examples match hand evaluation") {
    TrustParams p;
    PrincipalRecord pos{TrustLedger{}, TrustState::initial(p)};
    auto obs = observe(pos, ActionKind::Positive, p);
    CHECK(obs.pa == 1.0);
    CHECK(obs.after == 0.75);

    PrincipalRecord mal{TrustLedger{}, TrustState::initial(p)};
    obs = observe(mal, ActionKind::Malicious, p);
    CHECK(obs.pa == 0.0);
    CHECK(obs.after == 0.25);
}

TEST_CASE("observe removes after the configured streak unless told not to") {
    TrustParams p;
    PrincipalRecord user{TrustLedger{}, TrustState::initial(p)};
    PrincipalRecord domain = user;
    for (int i = 0; i < 3; ++i) {
        auto obs = observe(user, ActionKind::Malicious, p);
        CHECK(obs.removed_now == (i == 2));
        observe(domain, ActionKind::Malicious, p, std::nullopt, Removal::Skip);
    }
    CHECK(user.state.removed);
    CHECK(user.state.cls == TrustClass::NonTrusted);
    CHECK_FALSE(domain.state.removed);
    CHECK(code_of([&] { observe(user, ActionKind::Positive, p); }) == Errc::RemovedPrincipal);
}

TEST_CASE("trust series agrees with the oracle on random sequences") {
    testing::Rng rng(2024);
    for (int round = 0; round < 2000; ++round) {
        auto p = testing::any_params(rng);
        std::vector<ActionKind> actions(testing::below(rng, 30));
        for (auto& a : actions) a = testing::any_kind(rng);

        PrincipalRecord rec{TrustLedger{}, TrustState::initial(p)};
        std::vector<double> series{rec.state.value};
        for (auto a : actions) {
            if (rec.state.removed) break;
            series.push_back(observe(rec, a, p).after);
        }
        const auto expected = harness::trust_oracle(actions, harness::OracleParams::from(p));
        REQUIRE(series.size() == expected.size());
        for (std::size_t i = 0; i < series.size(); ++i) REQUIRE_THAT(series[i], WithinAbs(expected[i], 1e-12));
    }
}

TEST_CASE("action probability stays in bounds and is monotone") {
    testing::Rng rng(7);
    for (int round = 0; round < 10000; ++round) {
        const auto total = 1 + testing::below(rng, 1000);
        const auto na = testing::below(rng, total + 1);
        const auto w = testing::unit(rng);
        const int l = static_cast<int>(1 + testing::below(rng, 10));
        const double pa = action_probability(na, total, w, l);
        REQUIRE(pa >= 0.0);
        REQUIRE(pa <= 1.0);
        if (na < total) REQUIRE(action_probability(na + 1, total, w, l) <= pa);
        REQUIRE(action_probability(na, total, w, l + 1) <= pa);
    }
}
