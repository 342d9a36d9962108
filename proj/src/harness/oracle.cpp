#include "trustgate/harness/oracle.hpp"

namespace trustgate::harness {

OracleParams OracleParams::from(const trust::TrustParams& p) {
    OracleParams o;
    o.alpha = p.smoothing_alpha;
    o.initial = p.initial_trust;
    o.w_positive = p.weight_positive;
    o.w_wrong = p.weight_wrong;
    o.w_malicious = p.weight_malicious;
    o.level = p.level;
    o.removal_streak = p.removal_streak;
    return o;
}

double oracle_action_probability(std::uint64_t negatives, std::uint64_t total, double weight, int level) {
    double amplified = 1.0;
    for (int i = 0; i < level; ++i) amplified *= weight;
    const double ratio = static_cast<double>(negatives) / static_cast<double>(total);
    return (1.0 - ratio) * amplified;
}

std::vector<double> trust_oracle(const std::vector<trust::ActionKind>& actions, const OracleParams& params) {
    std::vector<double> series{params.initial};
    double trust = params.initial;
    std::uint64_t negatives = 0;
    std::uint64_t total = 0;
    std::uint32_t malicious_run = 0;

    for (const auto kind : actions) {
        if (malicious_run >= params.removal_streak) break;
        double weight = params.w_positive;
        if (kind == trust::ActionKind::Wrong) weight = params.w_wrong;
        if (kind == trust::ActionKind::Malicious) weight = params.w_malicious;

        total += 1;
        if (kind != trust::ActionKind::Positive) negatives += 1;
        malicious_run = kind == trust::ActionKind::Malicious ? malicious_run + 1 : 0;

        const double pa = oracle_action_probability(negatives, total, weight, params.level);
        trust = params.alpha * trust + (1.0 - params.alpha) * pa;
        series.push_back(trust);
    }
    return series;
}

} // namespace trustgate::harness
