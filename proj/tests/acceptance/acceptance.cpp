// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "trustgate/harness/generator.hpp"
#include "trustgate/harness/oracle.hpp"
#include "trustgate/harness/simulation.hpp"
#include "trustgate/trust/database.hpp"

using namespace trustgate;
using namespace trustgate::harness;
using protocol::EventKind;
using protocol::MsgType;
using protocol::Trace;
using trust::ActionKind;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
    // First counterexample, kept short.
    std::string failure;

    void fail(const std::string& why) {
        if (pass) failure = why;
        pass = false;
    }
};

std::string fmt(const char* format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// Corpus shared by several criteria.
struct Corpus {
    std::vector<Scenario> scenarios;
    std::vector<RunResult> runs;
};

Corpus build_corpus(std::uint64_t first_seed, std::size_t n, bool faults) {
    Corpus c;
    GeneratorOptions opts;
    opts.faults = faults;
    for (std::size_t i = 0; i < n; ++i) {
        c.scenarios.push_back(random_scenario(first_seed + i, opts));
        c.runs.push_back(run_scenario(c.scenarios.back()));
    }
    return c;
}

bool is_event(const protocol::TraceEvent& ev, EventKind kind, MsgType type) {
    return ev.event == kind && ev.msg_type == type;
}

// Request outcomes in the order the interface agents reported them.
std::vector<std::pair<std::uint64_t, std::string>> outcomes(const Trace& t) {
    std::vector<std::pair<std::uint64_t, std::string>> out;
    for (const auto& ev : t.events)
        if (ev.event == EventKind::Note && ev.note == protocol::note::kRequestDone) out.emplace_back(ev.req_id, ev.detail);
    return out;
}

Scenario scripted(const std::string& name, std::vector<ActionKind> conduct, std::uint32_t streak) {
    Scenario s;
    s.name = name;
    s.seed = 2;
    s.params.removal_streak = streak;
    s.params.user_threshold = 0.0;
    s.domains = {{"acme", 0.0}};
    s.users = {{"mallory", "acme", "pw", {}}};
    for (std::size_t i = 0; i < conduct.size(); ++i) {
        RequestSpec r;
        r.user = "mallory";
        r.domain = "acme";
        r.at = 100 * i;
        r.conduct = conduct[i];
        s.requests.push_back(r);
    }
    return s;
}

Scenario one_request(std::optional<agents::FaultyAgent> faulty, ActionKind conduct) {
    Scenario s;
    s.name = "one";
    s.seed = 4;
    s.domains = {{"acme", 0.5}};
    s.users = {{"alice", "acme", "pw", {}}};
    RequestSpec r;
    r.user = "alice";
    r.domain = "acme";
    r.conduct = conduct;
    s.requests = {r};
    s.faulty_agent = faulty;
    return s;
}

// ---------------------------------------------------------------------------

Result ac1_oracle_equivalence() {
    Result r;
    testing::Rng rng(0xAC1);
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    constexpr int kCases = 100000;
    for (int i = 0; i < kCases; ++i) {
        const auto total = 1 + testing::below(rng, 10000);
        const auto na = testing::below(rng, total + 1);
        const double w = testing::unit(rng);
        const int l = static_cast<int>(1 + testing::below(rng, 10));
        const double got = trust::action_probability(na, total, w, l);
        const double want = oracle_action_probability(na, total, w, l);
        const double err = std::fabs(got - want);
        worst = std::max(worst, err);
        if (err > 1e-12) r.fail(fmt("Na=%llu total=%llu W=%.17g l=%d: %.17g vs %.17g", (unsigned long long)na,
                                    (unsigned long long)total, w, l, got, want));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 5.0) r.fail(fmt("took %.2f s", secs));
    r.detail = fmt("%d tuples, max |diff| %.3g, %.3f s", kCases, worst, secs);
    return r;
}

Result ac2_bounds_and_monotonicity() {
    Result r;
    testing::Rng rng(0xAC2);
    constexpr int kCases = 10000;
    auto draw = [&] {
        const auto total = 1 + testing::below(rng, 10000);
        return std::tuple{testing::below(rng, total + 1), total, testing::unit(rng),
                          static_cast<int>(1 + testing::below(rng, 10))};
    };
    for (int i = 0; i < kCases; ++i) {
        const auto [na, total, w, l] = draw();
        const double pa = trust::action_probability(na, total, w, l);
        if (!(pa >= 0.0 && pa <= 1.0)) r.fail(fmt("bounds: Pa=%.17g", pa));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto [na, total, w, l] = draw();
        const auto more = na + testing::below(rng, total - na + 1);
        if (trust::action_probability(more, total, w, l) > trust::action_probability(na, total, w, l))
            r.fail(fmt("Na monotonicity: Na=%llu -> %llu", (unsigned long long)na, (unsigned long long)more));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto [na, total, w, l] = draw();
        const int higher = l + static_cast<int>(testing::below(rng, 11 - l));
        if (trust::action_probability(na, total, w, higher) > trust::action_probability(na, total, w, l))
            r.fail(fmt("level monotonicity: l=%d -> %d, W=%.17g", l, higher, w));
    }
    for (int i = 0; i < kCases; ++i) {
        const auto [na, total, w, l] = draw();
        const auto fewer = testing::below(rng, na + 1);
        const double heavier = w + (1.0 - w) * testing::unit(rng);
        if (trust::action_probability(fewer, total, heavier, l) < trust::action_probability(na, total, w, l))
            r.fail(fmt("ordering: (Na=%llu,W=%.17g) vs (Na=%llu,W=%.17g)", (unsigned long long)fewer, heavier,
                       (unsigned long long)na, w));
    }
    r.detail = fmt("4 properties x %d cases", kCases);
    return r;
}

Result ac3_series_agreement(const Corpus& clean) {
    Result r;
    std::size_t users = 0, points = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < clean.runs.size(); ++k) {
        const auto& s = clean.scenarios[k];
        const auto& run = clean.runs[k];
        const auto schedule = expand_schedule(s);
        std::map<std::uint64_t, const ScheduledRequest*> by_id;
        for (const auto& q : schedule) by_id[q.req_id] = &q;

        // Domain trust, recomputed with the oracle from the scheduled conduct
        // of every served request in the order the service reported them.
        // A report that is malicious or leaves the domain below its
        // threshold turns into a breach notice against the user.
        OracleParams domain_params = OracleParams::from(s.params);
        domain_params.removal_streak = std::numeric_limits<std::uint32_t>::max();
        std::map<std::string, double> thresholds;
        for (const auto& d : s.domains) thresholds[d.id] = d.threshold;
        std::map<std::string, std::vector<ActionKind>> domain_actions;
        std::map<std::uint64_t, ActionKind> recorded;
        for (const auto& ev : run.trace.events) {
            if (ev.event != EventKind::Note || ev.note != protocol::note::kDtaReport) continue;
            const auto& q = *by_id.at(ev.req_id);
            const auto& domain = s.users[q.user_index].domain;
            auto& seen = domain_actions[domain];
            seen.push_back(q.conduct);
            const double after = trust_oracle(seen, domain_params).back();
            const bool breach = q.conduct == ActionKind::Malicious || after < thresholds.at(domain);
            recorded[ev.req_id] = breach && q.conduct != ActionKind::Malicious ? ActionKind::Wrong : q.conduct;
        }

        // Per user, in completion order: a served request records the
        // action above (its result is withheld when that very action got the
        // user removed), a domain-gate rejection records a wrong action,
        // anything stopped earlier records nothing.
        std::map<std::string, std::vector<ActionKind>> expected_actions;
        for (const auto& [req, outcome] : outcomes(run.trace)) {
            const auto& q = *by_id.at(req);
            const auto key = s.users[q.user_index].key();
            if (outcome == "granted" || outcome == "rejected:SessionExpired") {
                if (!recorded.contains(req)) r.fail("request " + std::to_string(req) + " served without a report");
                expected_actions[key].push_back(recorded[req]);
            }
            if (outcome == "rejected:DomainGate") expected_actions[key].push_back(ActionKind::Wrong);
        }
        if (realized_actions(run.trace) != expected_actions)
            r.fail(fmt("seed %llu: realized actions differ from the schedule", (unsigned long long)s.seed));

        for (const auto& [user, series] : run.metrics.trust_series) {
            ++users;
            auto it = expected_actions.find(user);
            const auto want = trust_oracle(it == expected_actions.end() ? std::vector<ActionKind>{} : it->second,
                                           OracleParams::from(s.params));
            if (want.size() != series.size()) {
                r.fail(fmt("seed %llu %s: %zu points vs oracle %zu", (unsigned long long)s.seed, user.c_str(),
                           series.size(), want.size()));
                continue;
            }
            for (std::size_t i = 0; i < series.size(); ++i) {
                ++points;
                const double err = std::fabs(series[i] - want[i]);
                worst = std::max(worst, err);
                if (err > 1e-12)
                    r.fail(fmt("seed %llu %s step %zu: %.17g vs %.17g", (unsigned long long)s.seed, user.c_str(), i,
                               series[i], want[i]));
            }
        }
    }
    r.detail = fmt("%zu scenarios, %zu users, %zu points, max |diff| %.3g", clean.runs.size(), users, points, worst);
    return r;
}

Result ac4_gate_soundness(const Corpus& clean, const Corpus& faulty) {
    Result r;
    std::size_t refusals = 0, traces = 0;
    for (const auto* c : {&clean, &faulty}) {
        for (std::size_t k = 0; k < c->runs.size(); ++k) {
            const auto& t = c->runs[k].trace;
            ++traces;
            for (const auto& ev : t.events)
                if (ev.event == EventKind::Sent && ev.detail == "not_trusted") ++refusals;
            const auto user = check_user_gate(t);
            const auto domain = check_domain_gate(t);
            if (!user.empty()) r.fail("seed " + std::to_string(c->scenarios[k].seed) + ": " + user[0].detail);
            if (!domain.empty()) r.fail("seed " + std::to_string(c->scenarios[k].seed) + ": " + domain[0].detail);
        }
    }
    if (refusals == 0) r.fail("no gate ever refused; the check was vacuous");
    r.detail = fmt("%zu traces, %zu not_trusted replies, 0 gated sends expected", traces, refusals);
    return r;
}

Result ac5_removal() {
    Result r;
    std::size_t cases = 0;
    auto check = [&](const std::string& name, std::vector<ActionKind> conduct, std::uint32_t streak,
                     std::uint64_t removal_req) {
        ++cases;
        const auto run = run_scenario(scripted(name, conduct, streak));
        std::vector<std::uint64_t> removed;
        for (const auto& ev : run.trace.events)
            if (ev.event == EventKind::Note && ev.note == protocol::note::kUserRemoved) removed.push_back(ev.req_id);
        if (removed != std::vector<std::uint64_t>{removal_req}) {
            r.fail(name + ": removal not at request " + std::to_string(removal_req));
            return;
        }
        // The removing request itself is served, but its result is
        // withheld from the now removed user.
        for (const auto& [req, outcome] : outcomes(run.trace)) {
            const char* want = req < removal_req    ? "granted"
                               : req == removal_req ? "rejected:SessionExpired"
                                                    : "rejected:AuthFailed";
            if (outcome != want) r.fail(name + ": request " + std::to_string(req) + " ended " + outcome);
        }
        for (const auto& ev : run.trace.events)
            if (ev.req_id > removal_req && (is_event(ev, EventKind::Sent, MsgType::AuthResult) ||
                                            is_event(ev, EventKind::Sent, MsgType::MigrateOut)))
                r.fail(name + ": removed user got " + std::string(to_string(*ev.msg_type)));
        if (!check_removal_permanence(run.trace).empty()) r.fail(name + ": removal_permanence violated");
        if (run.metrics.users_removed != 1) r.fail(name + ": users_removed != 1");
    };

    const auto M = ActionKind::Malicious, P = ActionKind::Positive, W = ActionKind::Wrong;
    check("default streak", {M, M, M, M, M}, 3, 3);
    check("warm-up then attack", {P, P, M, M, M, M}, 3, 5);
    check("streak reset by positive", {M, M, P, M, M, M, M}, 3, 6);
    check("streak reset by wrong", {M, M, W, M, M, M, P}, 3, 6);
    for (std::uint32_t streak = 1; streak <= 6; ++streak)
        check("streak " + std::to_string(streak), std::vector<ActionKind>(streak + 3, M), streak, streak);
    r.detail = fmt("%zu scripted attackers", cases);
    return r;
}

Result ac6_breach_immediacy(const std::vector<const Corpus*>& corpora) {
    Result r;
    std::size_t malicious = 0, traces = 0;
    for (const auto* c : corpora) {
        for (std::size_t k = 0; k < c->runs.size(); ++k) {
            const auto& t = c->runs[k].trace;
            ++traces;
            std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> notices;
            for (const auto& ev : t.events)
                if (is_event(ev, EventKind::Sent, MsgType::BreachNotice) && ev.from == "dta")
                    ++notices[{ev.req_id, ev.cycle}];
            for (const auto& ev : t.events) {
                if (ev.event != EventKind::Note || ev.note != protocol::note::kDtaReport) continue;
                if (!ev.detail.starts_with("Malicious")) continue;
                ++malicious;
                if (!notices.contains({ev.req_id, ev.cycle}))
                    r.fail("seed " + std::to_string(c->scenarios[k].seed) + " request " + std::to_string(ev.req_id) +
                           ": no BreachNotice in the report's cycle");
            }
            if (!check_breach_immediacy(t).empty())
                r.fail("seed " + std::to_string(c->scenarios[k].seed) + ": breach_immediacy check fired");
        }
    }
    if (malicious == 0) r.fail("no malicious report observed; the check was vacuous");

    const auto suppressed = run_scenario(one_request(agents::FaultyAgent::DtaSuppressesBreach, ActionKind::Malicious));
    if (check_breach_immediacy(suppressed.trace).empty()) r.fail("suppressing double not caught");
    r.detail = fmt("%zu traces, %zu malicious reports, suppressing double caught", traces, malicious);
    return r;
}

Result ac7_message_budget(const Corpus& clean) {
    Result r;
    const std::multiset<MsgType> fig7{MsgType::AuthSubmit,       MsgType::AuthResult,  MsgType::TrustQueryUser,
                                      MsgType::TrustReplyUser,   MsgType::MigrateOut,  MsgType::DomainTrustQuery,
                                      MsgType::DomainTrustReply, MsgType::ServiceCall, MsgType::ServiceResult,
                                      MsgType::MigrateBack,      MsgType::DeliverResult, MsgType::TrustUpdate};
    std::size_t checked = 0;
    auto check_trace = [&](const Trace& t, const std::string& where) {
        std::map<std::uint64_t, std::multiset<MsgType>> delivered;
        std::map<std::uint64_t, int> out, back;
        std::set<std::uint64_t> granted, breached;
        for (const auto& ev : t.events) {
            if (ev.event == EventKind::Delivered && ev.fault.empty()) delivered[ev.req_id].insert(*ev.msg_type);
            if (is_event(ev, EventKind::Sent, MsgType::MigrateOut)) ++out[ev.req_id];
            if (is_event(ev, EventKind::Sent, MsgType::MigrateBack)) ++back[ev.req_id];
            if (is_event(ev, EventKind::Sent, MsgType::BreachNotice)) breached.insert(ev.req_id);
            if (ev.event == EventKind::Note && ev.note == protocol::note::kRequestDone && ev.detail == "granted")
                granted.insert(ev.req_id);
        }
        for (auto req : granted) {
            if (out[req] != 1 || back[req] != 1)
                r.fail(where + " request " + std::to_string(req) + ": migrations out/back = " +
                       std::to_string(out[req]) + "/" + std::to_string(back[req]));
            if (breached.contains(req)) continue;
            ++checked;
            if (delivered[req] != fig7)
                r.fail(where + " request " + std::to_string(req) + ": " + std::to_string(delivered[req].size()) +
                       " delivered envelopes, not the 12-message multiset");
        }
    };

    const auto single = run_scenario(one_request(std::nullopt, ActionKind::Positive));
    if (single.metrics.envelopes_delivered != 12) r.fail("single honest request delivered != 12");
    check_trace(single.trace, "single");
    for (std::size_t k = 0; k < clean.runs.size(); ++k)
        check_trace(clean.runs[k].trace, "seed " + std::to_string(clean.scenarios[k].seed));
    r.detail = fmt("%zu breach-free granted requests with exactly 12 deliveries", checked);
    return r;
}

Result ac8_conformance(const Corpus& clean) {
    Result r;
    for (std::size_t k = 0; k < clean.runs.size(); ++k)
        if (!clean.runs[k].verdict.conformant())
            r.fail("seed " + std::to_string(clean.scenarios[k].seed) + " not conformant");

    // For each ordering mutation the first offense is the first accepted
    // delivery of the message that skipped its gate.
    std::size_t doubles = 0;
    auto check_double = [&](agents::FaultyAgent f, MsgType offender) {
        ++doubles;
        const auto run = run_scenario(one_request(f, ActionKind::Positive));
        std::uint64_t expected = 0;
        for (const auto& ev : run.trace.events)
            if (is_event(ev, EventKind::Delivered, offender) && ev.fault.empty()) {
                expected = ev.seq;
                break;
            }
        const auto& v = run.verdict.lifecycles;
        const std::string name(agents::to_string(f));
        if (v.size() != 1 || v[0].conformant) {
            r.fail(name + ": not flagged");
            return;
        }
        if (v[0].offending_seq != expected || v[0].offending_msg != to_string(offender))
            r.fail(name + ": flagged at " + v[0].offending_msg + "@" + std::to_string(v[0].offending_seq) +
                   ", expected " + std::string(to_string(offender)) + "@" + std::to_string(expected));
    };
    check_double(agents::FaultyAgent::ProxySkipsUserGate, MsgType::MigrateOut);
    check_double(agents::FaultyAgent::MaSkipsDomainGate, MsgType::ServiceCall);

    // The suppressing double keeps the order intact; its offense is the
    // report that should have produced a notice.
    ++doubles;
    const auto run = run_scenario(one_request(agents::FaultyAgent::DtaSuppressesBreach, ActionKind::Malicious));
    std::uint64_t report = 0;
    for (const auto& ev : run.trace.events)
        if (ev.event == EventKind::Note && ev.note == protocol::note::kDtaReport) report = ev.seq;
    const auto found = check_breach_immediacy(run.trace);
    if (found.size() != 1 || found[0].seq != report) r.fail("dta_suppresses_breach: not flagged at its report");

    r.detail = fmt("%zu zero-fault traces conformant, %zu test doubles flagged at first offense", clean.runs.size(),
                   doubles);
    return r;
}

Result ac9_determinism() {
    Result r;
    constexpr std::uint64_t kPairs = 100;
    for (std::uint64_t seed = 0; seed < kPairs; ++seed) {
        GeneratorOptions opts;
        opts.faults = seed % 2 == 1;
        const auto s = random_scenario(9000 + seed, opts);
        const auto a = run_scenario(s);
        const auto b = run_scenario(s);
        if (protocol::to_jsonl(a.trace) != protocol::to_jsonl(b.trace))
            r.fail("seed " + std::to_string(s.seed) + ": traces differ");
        if (to_json(a.metrics) != to_json(b.metrics)) r.fail("seed " + std::to_string(s.seed) + ": metrics differ");
    }
    r.detail = fmt("%llu scenario/seed pairs, half with faults", (unsigned long long)kPairs);
    return r;
}

Bytes read_golden(const std::string& name) {
    std::ifstream in(std::string(TRUSTGATE_GOLDEN_DIR) + "/" + name, std::ios::binary);
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

Result ac10_persistence() {
    Result r;
    testing::Rng rng(0xAC10);
    constexpr int kStates = 1000;
    std::size_t records = 0;
    for (int i = 0; i < kStates; ++i) {
        const auto db = testing::any_database(rng);
        records += db.size();
        const auto bytes = trust::save_db(db);
        if (!(trust::load_db(bytes) == db)) r.fail(fmt("state %d did not round trip", i));
        if (trust::save_db(trust::load_db(bytes)) != bytes) r.fail(fmt("state %d re-encoded differently", i));
    }

    // Golden snapshot: the records it was written from, rebuilt by hand.
    trust::TrustDatabase want;
    using trust::ActionRecord;
    trust::PrincipalRecord alice;
    alice.ledger = trust::TrustLedger::from_history({ActionRecord{ActionKind::Positive, 1.0, 1},
                                                     ActionRecord{ActionKind::Positive, 1.0, 2},
                                                     ActionRecord{ActionKind::Malicious, 0.1, 3}});
    const double v = 0.5 * (0.5 * (0.5 * 0.5 + 0.5) + 0.5) + 0.5 * ((1.0 - 1.0 / 3.0) * 0.1);
    alice.state = {v, trust::TrustClass::Innocent, 1, false};
    want.put("alice@acme", alice);
    want.put("bob@acme", {trust::TrustLedger{}, {0.5, trust::TrustClass::Innocent, 0, false}});
    trust::PrincipalRecord mallory;
    mallory.ledger = trust::TrustLedger::from_history({ActionRecord{ActionKind::Malicious, 0.1, 1},
                                                       ActionRecord{ActionKind::Malicious, 0.1, 2},
                                                       ActionRecord{ActionKind::Malicious, 0.1, 3}});
    mallory.state = {0.0625, trust::TrustClass::NonTrusted, 3, true};
    want.put("mallory@acme", mallory);

    for (const auto& [file, expected] :
         std::vector<std::pair<std::string, trust::TrustDatabase>>{{"tgdb_v1.bin", want}, {"tgdb_v1_empty.bin", {}}}) {
        const auto bytes = read_golden(file);
        try {
            const auto db = trust::load_db(bytes);
            if (!(db == expected)) r.fail(file + " decoded to different records");
            if (trust::save_db(db) != bytes) r.fail(file + " did not re-encode bit-exactly");
        } catch (const std::exception& e) {
            r.fail(file + ": " + e.what());
        }
    }
    r.detail = fmt("%d random states (%zu records), 2 golden snapshots", kStates, records);
    return r;
}

} // namespace

int main() {
    int failed = 0;
    auto report = [&](const char* id, const char* title, const std::function<Result()>& fn) {
        Result res;
        try {
            res = fn();
        } catch (const std::exception& e) {
            res.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %-4s %s: %s\n", res.pass ? "PASS" : "FAIL", id, title, res.detail.c_str());
        if (!res.pass) {
            std::printf("     first failure: %s\n", res.failure.c_str());
            ++failed;
        }
        std::fflush(stdout);
    };

    report("AC1", "action probability matches direct arithmetic", ac1_oracle_equivalence);
    report("AC2", "action probability bounds and monotonicity", ac2_bounds_and_monotonicity);

    const auto clean = build_corpus(1, 1000, false);
    const auto faulty = build_corpus(100001, 1000, true);

    report("AC3", "trust series agree with the oracle", [&] { return ac3_series_agreement(clean); });
    report("AC4", "gate soundness", [&] { return ac4_gate_soundness(clean, faulty); });
    report("AC5", "removal after the malicious streak", ac5_removal);
    report("AC6", "breach notice in the same cycle", [&] { return ac6_breach_immediacy({&clean, &faulty}); });
    report("AC7", "twelve envelopes per granted request", [&] { return ac7_message_budget(clean); });
    report("AC8", "conformance and first-offense detection", [&] { return ac8_conformance(clean); });
    report("AC9", "determinism", ac9_determinism);
    report("AC10", "snapshot persistence", ac10_persistence);

    std::printf("%d of 10 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
