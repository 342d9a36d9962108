#pragma once

// Scenario files are JSON documents with a fixed schema version. Unknown
// keys anywhere are errors, and validation reports every problem it finds
// rather than stopping at the first one. docs/formats.md has the schema.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/agents/agent.hpp"
#include "trustgate/agents/test_doubles.hpp"
#include "trustgate/error.hpp"
#include "trustgate/harness/behavior.hpp"
#include "trustgate/simnet/network.hpp"
#include "trustgate/trust/model.hpp"

namespace trustgate::harness {

inline constexpr int kSchemaVersion = 1;

struct DomainSpec {
    std::string id;
    double threshold = 0.5;

    bool operator==(const DomainSpec&) const = default;
};

struct UserSpec {
    std::string id;
    std::string domain;
    std::string password;
    BehaviorProfile profile;

    std::string key() const { return id + "@" + domain; }
    bool operator==(const UserSpec&) const = default;
};

struct RequestSpec {
    std::string user;
    std::string domain;
    std::uint64_t at = 0;
    std::string service = "default";
    std::uint32_t repeat = 1;
    std::uint64_t interval = 0;
    // Overrides the profile for every repetition.
    std::optional<trust::ActionKind> conduct;
    // Overrides the user's password, e.g. to script a failed login.
    std::optional<std::string> password;

    bool operator==(const RequestSpec&) const = default;
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    trust::TrustParams params;
    std::uint64_t gate_timeout = 10;
    // 0 means derive a bound from the schedule.
    std::uint64_t max_time = 0;
    simnet::FaultPlan faults;
    std::vector<DomainSpec> domains;
    std::vector<UserSpec> users;
    std::vector<RequestSpec> requests;
    std::map<std::string, std::string> catalog;
    std::optional<agents::FaultyAgent> faulty_agent;

    bool operator==(const Scenario&) const = default;
};

// One concrete request after expanding repeats, in req_id order.
struct ScheduledRequest {
    std::uint64_t req_id = 0;
    std::size_t user_index = 0;
    std::uint64_t at = 0;
    std::string service;
    trust::ActionKind conduct = trust::ActionKind::Positive;
    std::string password;
};

class ScenarioError : public Error {
public:
    explicit ScenarioError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

// Parses and validates. Throws ScenarioError listing every problem.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::string& path);

// Empty when the scenario is consistent.
std::vector<std::string> validate(const Scenario& scenario);

std::string to_json(const Scenario& scenario);

// Applies "key=value" overrides: params.<field>, faults.<field>, seed,
// gate_timeout, max_time. Throws ScenarioError on unknown keys or values.
void apply_override(Scenario& scenario, std::string_view assignment);

// Expands repeats, orders by (at, declaration order) and assigns req_ids
// from 1. Conduct comes from each user's profile unless overridden.
std::vector<ScheduledRequest> expand_schedule(const Scenario& scenario);

std::uint64_t effective_max_time(const Scenario& scenario, const std::vector<ScheduledRequest>& schedule);

} // namespace trustgate::harness
