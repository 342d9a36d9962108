#include "trustgate/trust/model.hpp"

#include <cmath>
#include <string>

#include "trustgate/error.hpp"

namespace trustgate::trust {

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

void require_unit(double v, const char* field) {
    if (!in_unit_interval(v))
        throw Error(Errc::InvalidParams, std::string(field) + " must lie in [0, 1], got " + std::to_string(v));
}

} // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Positive: return "Positive";
        case ActionKind::Wrong: return "Wrong";
        case ActionKind::Malicious: return "Malicious";
    }
    return "Unknown";
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
    if (name == "Positive" || name == "positive") return ActionKind::Positive;
    if (name == "Wrong" || name == "wrong") return ActionKind::Wrong;
    if (name == "Malicious" || name == "malicious") return ActionKind::Malicious;
    return std::nullopt;
}

std::string_view to_string(TrustClass cls) {
    switch (cls) {
        case TrustClass::Trusted: return "Trusted";
        case TrustClass::Innocent: return "Innocent";
        case TrustClass::NonTrusted: return "NonTrusted";
    }
    return "Unknown";
}

double TrustParams::weight_for(ActionKind kind) const {
    switch (kind) {
        case ActionKind::Positive: return weight_positive;
        case ActionKind::Wrong: return weight_wrong;
        case ActionKind::Malicious: return weight_malicious;
    }
    return 0.0;
}

void TrustParams::validate() const {
    if (level < 1) throw Error(Errc::InvalidParams, "level must be >= 1");
    require_unit(weight_positive, "weight_positive");
    require_unit(weight_wrong, "weight_wrong");
    require_unit(weight_malicious, "weight_malicious");
    if (!(weight_malicious <= weight_wrong && weight_wrong <= weight_positive))
        throw Error(Errc::InvalidParams, "weights must satisfy malicious <= wrong <= positive");
    require_unit(smoothing_alpha, "smoothing_alpha");
    require_unit(initial_trust, "initial_trust");
    require_unit(user_threshold, "user_threshold");
    require_unit(trusted_min, "trusted_min");
    require_unit(nontrusted_max, "nontrusted_max");
    if (!(nontrusted_max < trusted_min))
        throw Error(Errc::InvalidParams, "nontrusted_max must be below trusted_min");
    if (removal_streak < 1) throw Error(Errc::InvalidParams, "removal_streak must be >= 1");
}

TrustLedger TrustLedger::from_history(std::vector<ActionRecord> history) {
    TrustLedger ledger;
    std::uint64_t last_seq = 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& rec = history[i];
        if (!in_unit_interval(rec.weight))
            throw Error(Errc::InvalidArgument, "history weight outside [0, 1]");
        if (static_cast<std::uint8_t>(rec.kind) > 2)
            throw Error(Errc::InvalidArgument, "history action kind out of range");
        if (i > 0 && rec.seq <= last_seq)
            throw Error(Errc::InvalidArgument, "history seq not strictly increasing");
        last_seq = rec.seq;
        if (is_negative(rec.kind)) ++ledger.negatives_;
    }
    ledger.history_ = std::move(history);
    return ledger;
}

double action_probability(std::uint64_t negatives, std::uint64_t total, double weight, int level) {
    if (total == 0) throw Error(Errc::EmptyLedger, "no action recorded yet; use initial_trust");
    if (!in_unit_interval(weight))
        throw Error(Errc::InvalidWeight, "weight must lie in [0, 1], got " + std::to_string(weight));
    if (level < 1) throw Error(Errc::InvalidParams, "level must be >= 1");
    if (negatives > total) throw Error(Errc::InvalidArgument, "negatives exceed total");

    const double past_behavior = 1.0 - static_cast<double>(negatives) / static_cast<double>(total);
    return past_behavior * std::pow(weight, level);
}

double action_probability(const TrustLedger& ledger, double weight, int level) {
    return action_probability(ledger.negatives(), ledger.total(), weight, level);
}

TrustLedger record_action(TrustLedger ledger, ActionKind kind, const TrustParams& params,
                          std::optional<std::uint64_t> seq) {
    const std::uint64_t last = ledger.history_.empty() ? 0 : ledger.history_.back().seq;
    std::uint64_t next = seq.value_or(last + 1);
    if (!ledger.history_.empty() && next <= last)
        throw Error(Errc::InvalidArgument, "action seq must be strictly increasing");

    ledger.history_.push_back(ActionRecord{kind, params.weight_for(kind), next});
    if (is_negative(kind)) ++ledger.negatives_;
    return ledger;
}

TrustClass classify(double value, double trusted_min, double nontrusted_max) {
    if (nontrusted_max >= trusted_min)
        throw Error(Errc::InvalidThresholds, "nontrusted_max must be below trusted_min");
    if (value >= trusted_min) return TrustClass::Trusted;
    if (value < nontrusted_max) return TrustClass::NonTrusted;
    return TrustClass::Innocent;
}

TrustState TrustState::initial(const TrustParams& params) {
    return TrustState{params.initial_trust,
                      classify(params.initial_trust, params.trusted_min, params.nontrusted_max), 0, false};
}

TrustState update_trust(const TrustState& state, double pa, ActionKind trigger, const TrustParams& params) {
    if (state.removed) throw Error(Errc::RemovedPrincipal, "principal already removed");
    if (!in_unit_interval(pa)) throw Error(Errc::InvalidArgument, "pa must lie in [0, 1]");

    TrustState next = state;
    const double alpha = params.smoothing_alpha;
    next.value = alpha * state.value + (1.0 - alpha) * pa;
    next.cls = classify(next.value, params.trusted_min, params.nontrusted_max);
    next.malicious_streak = trigger == ActionKind::Malicious ? state.malicious_streak + 1 : 0;
    return next;
}

bool should_remove(const TrustState& state, const TrustParams& params) {
    return state.malicious_streak >= params.removal_streak;
}

TrustState mark_removed(TrustState state) {
    state.removed = true;
    state.cls = TrustClass::NonTrusted;
    return state;
}

Observation observe(PrincipalRecord& record, ActionKind kind, const TrustParams& params,
                    std::optional<std::uint64_t> seq, Removal removal) {
    if (record.state.removed) throw Error(Errc::RemovedPrincipal, "principal already removed");

    Observation obs;
    obs.before = record.state.value;
    auto ledger = record_action(record.ledger, kind, params, seq);
    obs.pa = action_probability(ledger, params.weight_for(kind), params.level);
    auto state = update_trust(record.state, obs.pa, kind, params);
    if (removal == Removal::Apply && should_remove(state, params)) {
        state = mark_removed(state);
        obs.removed_now = true;
    }
    record.ledger = std::move(ledger);
    record.state = state;
    obs.after = state.value;
    return obs;
}

} // namespace trustgate::trust
