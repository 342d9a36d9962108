#pragma once

// Trust model over user actions.
//
// A principal's evidence is a ledger of performed actions. After each new
// action the probability of a positive action is re-evaluated as
//
//     Pa = (1 - Na / total_a) * Wa^l
//
// where Na counts negative (wrong or malicious) actions, total_a counts all
// actions, Wa is the weight of the action just performed and l >= 1 is the
// security level. Pa feeds an exponential moving average that is the
// principal's trust value; the value is then classified and checked against
// the removal policy.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace trustgate::trust {

enum class ActionKind : std::uint8_t { Positive = 0, Wrong = 1, Malicious = 2 };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);

constexpr bool is_negative(ActionKind kind) { return kind != ActionKind::Positive; }

struct ActionRecord {
    ActionKind kind = ActionKind::Positive;
    double weight = 1.0;
    std::uint64_t seq = 0;

    bool operator==(const ActionRecord&) const = default;
};

struct TrustParams {
    int level = 1;
    double weight_positive = 1.0;
    double weight_wrong = 0.5;
    double weight_malicious = 0.1;
    double smoothing_alpha = 0.5;
    double initial_trust = 0.5;
    // Gate used by the user-tier trust agent (inclusive).
    double user_threshold = 0.5;
    double trusted_min = 0.7;
    double nontrusted_max = 0.3;
    std::uint32_t removal_streak = 3;

    double weight_for(ActionKind kind) const;

    // Throws Error(InvalidParams) naming the first offending field.
    void validate() const;

    bool operator==(const TrustParams&) const = default;
};

// Counters are only mutated through record_action, which keeps them equal to
// what the history implies.
class TrustLedger {
public:
    TrustLedger() = default;

    std::uint64_t negatives() const { return negatives_; }
    std::uint64_t total() const { return history_.size(); }
    const std::vector<ActionRecord>& history() const { return history_; }

    // Rebuilds a ledger from a stored history; throws Error(InvalidArgument)
    // when the history breaks a ledger invariant.
    static TrustLedger from_history(std::vector<ActionRecord> history);

    bool operator==(const TrustLedger&) const = default;

private:
    friend TrustLedger record_action(TrustLedger, ActionKind, const TrustParams&, std::optional<std::uint64_t>);

    std::uint64_t negatives_ = 0;
    std::vector<ActionRecord> history_;
};

enum class TrustClass : std::uint8_t { Trusted = 0, Innocent = 1, NonTrusted = 2 };

std::string_view to_string(TrustClass cls);

struct TrustState {
    double value = 0.5;
    TrustClass cls = TrustClass::Innocent;
    std::uint32_t malicious_streak = 0;
    bool removed = false;

    static TrustState initial(const TrustParams& params);

    bool operator==(const TrustState&) const = default;
};

// Pa for the ledger's counters. Throws EmptyLedger when no action has been
// recorded and InvalidWeight when weight is outside [0, 1].
double action_probability(const TrustLedger& ledger, double weight, int level);
double action_probability(std::uint64_t negatives, std::uint64_t total, double weight, int level);

// Appends one action with the weight the parameters assign to its kind. When
// `seq` is omitted the next index after the last record is used; an explicit
// seq must be strictly greater than the last one.
TrustLedger record_action(TrustLedger ledger, ActionKind kind, const TrustParams& params,
                          std::optional<std::uint64_t> seq = std::nullopt);

// value' = alpha * value + (1 - alpha) * pa, then reclassified. The streak of
// consecutive malicious actions grows on Malicious and resets otherwise.
TrustState update_trust(const TrustState& state, double pa, ActionKind trigger, const TrustParams& params);

// Trusted iff value >= trusted_min, NonTrusted iff value < nontrusted_max.
TrustClass classify(double value, double trusted_min, double nontrusted_max);

bool should_remove(const TrustState& state, const TrustParams& params);

// Sets removed and forces the NonTrusted class.
TrustState mark_removed(TrustState state);

// One principal's evidence and derived state.
struct PrincipalRecord {
    TrustLedger ledger;
    TrustState state;

    bool operator==(const PrincipalRecord&) const = default;
};

struct Observation {
    double pa = 0.0;
    double before = 0.0;
    double after = 0.0;
    bool removed_now = false;
};

enum class Removal { Apply, Skip };

// record_action + action_probability + update_trust, then the removal check
// unless skipped (domains are never removed). Throws RemovedPrincipal if the
// principal was already removed.
Observation observe(PrincipalRecord& record, ActionKind kind, const TrustParams& params,
                    std::optional<std::uint64_t> seq = std::nullopt, Removal removal = Removal::Apply);

} // namespace trustgate::trust
