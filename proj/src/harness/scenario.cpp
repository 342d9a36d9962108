#include "trustgate/harness/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trustgate::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += "; ";
        out += l;
    }
    return out;
}

// Reads typed fields out of a JSON object and records a diagnostic for each
// problem instead of throwing.
class Reader {
public:
    explicit Reader(std::vector<std::string>& diags) : diags_(diags) {}

    void only(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
        for (const auto& [k, v] : obj.items()) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                diags_.push_back(path + ": unknown key '" + k + "'");
        }
    }

    bool object(const json& v, const std::string& path) {
        if (v.is_object()) return true;
        diags_.push_back(path + ": expected an object");
        return false;
    }

    bool array(const json& v, const std::string& path) {
        if (v.is_array()) return true;
        diags_.push_back(path + ": expected an array");
        return false;
    }

    template <typename T>
    void uint(const json& obj, const char* key, const std::string& path, T& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            diags_.push_back(path + "." + key + ": expected a non-negative integer");
            return;
        }
        const auto raw = v.get<std::uint64_t>();
        if (raw > std::numeric_limits<T>::max()) {
            diags_.push_back(path + "." + key + ": value out of range");
            return;
        }
        out = static_cast<T>(raw);
    }

    void integer(const json& obj, const char* key, const std::string& path, int& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) {
            diags_.push_back(path + "." + key + ": expected an integer");
            return;
        }
        out = v.get<int>();
    }

    void real(const json& obj, const char* key, const std::string& path, double& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            diags_.push_back(path + "." + key + ": expected a number");
            return;
        }
        out = v.get<double>();
    }

    void string(const json& obj, const char* key, const std::string& path, std::string& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_string()) {
            diags_.push_back(path + "." + key + ": expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    void required(const json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key)) diags_.push_back(path + ": missing required key '" + key + "'");
    }

    void fail(std::string message) { diags_.push_back(std::move(message)); }

private:
    std::vector<std::string>& diags_;
};

void read_params(Reader& r, const json& j, trust::TrustParams& p) {
    const std::string path = "params";
    if (!r.object(j, path)) return;
    r.only(j, path,
           {"level", "weight_positive", "weight_wrong", "weight_malicious", "smoothing_alpha", "initial_trust",
            "user_threshold", "trusted_min", "nontrusted_max", "removal_streak"});
    r.integer(j, "level", path, p.level);
    r.real(j, "weight_positive", path, p.weight_positive);
    r.real(j, "weight_wrong", path, p.weight_wrong);
    r.real(j, "weight_malicious", path, p.weight_malicious);
    r.real(j, "smoothing_alpha", path, p.smoothing_alpha);
    r.real(j, "initial_trust", path, p.initial_trust);
    r.real(j, "user_threshold", path, p.user_threshold);
    r.real(j, "trusted_min", path, p.trusted_min);
    r.real(j, "nontrusted_max", path, p.nontrusted_max);
    r.uint(j, "removal_streak", path, p.removal_streak);
}

void read_faults(Reader& r, const json& j, simnet::FaultPlan& f) {
    const std::string path = "faults";
    if (!r.object(j, path)) return;
    r.only(j, path, {"drop_prob", "dup_prob", "tamper_prob", "latency_min", "latency_max"});
    r.real(j, "drop_prob", path, f.drop_prob);
    r.real(j, "dup_prob", path, f.dup_prob);
    r.real(j, "tamper_prob", path, f.tamper_prob);
    r.uint(j, "latency_min", path, f.latency_min);
    r.uint(j, "latency_max", path, f.latency_max);
}

void read_profile(Reader& r, const json& j, const std::string& path, BehaviorProfile& p) {
    if (!r.object(j, path)) return;
    r.only(j, path, {"kind", "p", "q", "warmup"});
    r.required(j, "kind", path);
    std::string kind = "honest";
    r.string(j, "kind", path, kind);
    if (kind == "honest") {
        p.kind = ProfileKind::Honest;
    } else if (kind == "sloppy") {
        p.kind = ProfileKind::Sloppy;
    } else if (kind == "attacker") {
        p.kind = ProfileKind::Attacker;
    } else {
        r.fail(path + ".kind: unknown profile '" + kind + "'");
    }
    r.real(j, "p", path, p.p);
    r.real(j, "q", path, p.q);
    r.uint(j, "warmup", path, p.warmup);
}

ordered_json params_json(const trust::TrustParams& p) {
    ordered_json j;
    j["level"] = p.level;
    j["weight_positive"] = p.weight_positive;
    j["weight_wrong"] = p.weight_wrong;
    j["weight_malicious"] = p.weight_malicious;
    j["smoothing_alpha"] = p.smoothing_alpha;
    j["initial_trust"] = p.initial_trust;
    j["user_threshold"] = p.user_threshold;
    j["trusted_min"] = p.trusted_min;
    j["nontrusted_max"] = p.nontrusted_max;
    j["removal_streak"] = p.removal_streak;
    return j;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

ScenarioError::ScenarioError(std::vector<std::string> diagnostics)
    : Error(Errc::InvalidScenario, join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Scenario parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError({std::string("not valid JSON: ") + e.what()});
    }

    std::vector<std::string> diags;
    Reader r(diags);
    Scenario s;
    if (!r.object(doc, "scenario")) throw ScenarioError(diags);

    r.only(doc, "scenario",
           {"schema_version", "name", "seed", "params", "timeout", "max_time", "faults", "domains", "users",
            "requests", "catalog", "faulty_agent"});
    r.required(doc, "schema_version", "scenario");
    int version = kSchemaVersion;
    r.integer(doc, "schema_version", "scenario", version);
    if (version != kSchemaVersion)
        r.fail("scenario.schema_version: unsupported version " + std::to_string(version) + ", expected " +
               std::to_string(kSchemaVersion));

    r.string(doc, "name", "scenario", s.name);
    r.uint(doc, "seed", "scenario", s.seed);
    r.uint(doc, "timeout", "scenario", s.gate_timeout);
    r.uint(doc, "max_time", "scenario", s.max_time);
    if (doc.contains("params")) read_params(r, doc["params"], s.params);
    if (doc.contains("faults")) read_faults(r, doc["faults"], s.faults);

    r.required(doc, "domains", "scenario");
    if (doc.contains("domains") && r.array(doc["domains"], "domains")) {
        for (std::size_t i = 0; i < doc["domains"].size(); ++i) {
            const auto& d = doc["domains"][i];
            const auto path = "domains[" + std::to_string(i) + "]";
            if (!r.object(d, path)) continue;
            r.only(d, path, {"id", "threshold"});
            r.required(d, "id", path);
            DomainSpec spec;
            r.string(d, "id", path, spec.id);
            r.real(d, "threshold", path, spec.threshold);
            s.domains.push_back(spec);
        }
    }

    if (doc.contains("users") && r.array(doc["users"], "users")) {
        for (std::size_t i = 0; i < doc["users"].size(); ++i) {
            const auto& u = doc["users"][i];
            const auto path = "users[" + std::to_string(i) + "]";
            if (!r.object(u, path)) continue;
            r.only(u, path, {"id", "domain", "password", "profile"});
            r.required(u, "id", path);
            r.required(u, "domain", path);
            UserSpec spec;
            r.string(u, "id", path, spec.id);
            r.string(u, "domain", path, spec.domain);
            r.string(u, "password", path, spec.password);
            if (u.contains("profile")) read_profile(r, u["profile"], path + ".profile", spec.profile);
            s.users.push_back(spec);
        }
    }

    if (doc.contains("requests") && r.array(doc["requests"], "requests")) {
        for (std::size_t i = 0; i < doc["requests"].size(); ++i) {
            const auto& q = doc["requests"][i];
            const auto path = "requests[" + std::to_string(i) + "]";
            if (!r.object(q, path)) continue;
            r.only(q, path, {"user", "domain", "at", "service", "repeat", "interval", "conduct", "password"});
            r.required(q, "user", path);
            RequestSpec spec;
            r.string(q, "user", path, spec.user);
            r.string(q, "domain", path, spec.domain);
            r.uint(q, "at", path, spec.at);
            r.string(q, "service", path, spec.service);
            r.uint(q, "repeat", path, spec.repeat);
            r.uint(q, "interval", path, spec.interval);
            if (q.contains("conduct")) {
                std::string name;
                r.string(q, "conduct", path, name);
                if (auto kind = trust::parse_action_kind(name))
                    spec.conduct = kind;
                else if (q["conduct"].is_string())
                    r.fail(path + ".conduct: unknown action '" + name + "'");
            }
            if (q.contains("password")) {
                std::string pw;
                r.string(q, "password", path, pw);
                spec.password = pw;
            }
            // A bare user id resolves to its domain when unambiguous.
            if (spec.domain.empty()) {
                std::vector<std::string> owners;
                for (const auto& u : s.users)
                    if (u.id == spec.user) owners.push_back(u.domain);
                if (owners.size() == 1) spec.domain = owners.front();
                if (owners.size() > 1)
                    r.fail(path + ": user '" + spec.user + "' exists in several domains; set 'domain'");
            }
            s.requests.push_back(spec);
        }
    }

    if (doc.contains("catalog") && r.object(doc["catalog"], "catalog")) {
        for (const auto& [k, v] : doc["catalog"].items()) {
            if (!v.is_string())
                r.fail("catalog." + k + ": expected a string");
            else
                s.catalog[k] = v.get<std::string>();
        }
    }

    if (doc.contains("faulty_agent")) {
        std::string name;
        r.string(doc, "faulty_agent", "scenario", name);
        if (auto f = agents::parse_faulty_agent(name))
            s.faulty_agent = f;
        else if (doc["faulty_agent"].is_string())
            r.fail("scenario.faulty_agent: unknown test double '" + name + "'");
    }

    for (auto& d : validate(s)) diags.push_back(std::move(d));
    if (!diags.empty()) throw ScenarioError(std::move(diags));
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError({"cannot read scenario file '" + path + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> diags;

    try {
        s.params.validate();
    } catch (const Error& e) {
        diags.push_back(std::string("params: ") + e.what());
    }
    try {
        s.faults.validate();
    } catch (const Error& e) {
        diags.push_back(std::string("faults: ") + e.what());
    }
    if (s.gate_timeout == 0) diags.push_back("scenario.timeout: must be positive");

    std::set<std::string> domains;
    for (std::size_t i = 0; i < s.domains.size(); ++i) {
        const auto& d = s.domains[i];
        const auto path = "domains[" + std::to_string(i) + "]";
        if (d.id.empty()) diags.push_back(path + ": empty domain id");
        if (!domains.insert(d.id).second) diags.push_back(path + ": duplicate domain '" + d.id + "'");
        if (!in_unit(d.threshold)) diags.push_back(path + ".threshold: must lie in [0, 1]");
    }

    std::set<std::string> users;
    for (std::size_t i = 0; i < s.users.size(); ++i) {
        const auto& u = s.users[i];
        const auto path = "users[" + std::to_string(i) + "]";
        if (u.id.empty()) diags.push_back(path + ": empty user id");
        if (u.id.find('@') != std::string::npos) diags.push_back(path + ": user id '" + u.id + "' contains '@'");
        if (!domains.contains(u.domain))
            diags.push_back(path + ": user '" + u.id + "' references unknown domain '" + u.domain + "'");
        if (!users.insert(u.key()).second) diags.push_back(path + ": duplicate user '" + u.key() + "'");
        if (!in_unit(u.profile.p)) diags.push_back(path + ".profile.p: must lie in [0, 1]");
        if (!in_unit(u.profile.q)) diags.push_back(path + ".profile.q: must lie in [0, 1]");
    }

    for (std::size_t i = 0; i < s.requests.size(); ++i) {
        const auto& q = s.requests[i];
        const auto path = "requests[" + std::to_string(i) + "]";
        if (!users.contains(q.user + "@" + q.domain))
            diags.push_back(path + ": references undeclared user '" + q.user +
                            (q.domain.empty() ? std::string() : "@" + q.domain) + "'");
        if (q.repeat == 0) diags.push_back(path + ".repeat: must be at least 1");
        if (q.repeat > 1 && q.interval == 0) diags.push_back(path + ".interval: must be positive when repeating");
    }
    return diags;
}

std::string to_json(const Scenario& s) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["params"] = params_json(s.params);
    j["timeout"] = s.gate_timeout;
    j["max_time"] = s.max_time;
    j["faults"] = ordered_json{{"drop_prob", s.faults.drop_prob},
                               {"dup_prob", s.faults.dup_prob},
                               {"tamper_prob", s.faults.tamper_prob},
                               {"latency_min", s.faults.latency_min},
                               {"latency_max", s.faults.latency_max}};
    j["domains"] = ordered_json::array();
    for (const auto& d : s.domains) j["domains"].push_back(ordered_json{{"id", d.id}, {"threshold", d.threshold}});
    j["users"] = ordered_json::array();
    for (const auto& u : s.users) {
        ordered_json profile{{"kind", to_string(u.profile.kind)}};
        if (u.profile.kind == ProfileKind::Sloppy) profile["p"] = u.profile.p;
        if (u.profile.kind == ProfileKind::Attacker) {
            profile["q"] = u.profile.q;
            profile["warmup"] = u.profile.warmup;
        }
        j["users"].push_back(
            ordered_json{{"id", u.id}, {"domain", u.domain}, {"password", u.password}, {"profile", profile}});
    }
    j["requests"] = ordered_json::array();
    for (const auto& q : s.requests) {
        ordered_json r{{"user", q.user}, {"domain", q.domain}, {"at", q.at}, {"service", q.service},
                       {"repeat", q.repeat}, {"interval", q.interval}};
        if (q.conduct) r["conduct"] = lower(trust::to_string(*q.conduct));
        if (q.password) r["password"] = *q.password;
        j["requests"].push_back(r);
    }
    j["catalog"] = ordered_json::object();
    for (const auto& [k, v] : s.catalog) j["catalog"][k] = v;
    if (s.faulty_agent) j["faulty_agent"] = agents::to_string(*s.faulty_agent);
    return j.dump(2) + "\n";
}

void apply_override(Scenario& s, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ScenarioError({"override '" + std::string(assignment) + "': expected key=value"});
    const std::string key(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));

    // Reuse the file parser so overrides obey the same types and checks.
    json patch;
    try {
        patch = json::parse(value);
    } catch (const json::parse_error&) {
        patch = value;
    }

    std::vector<std::string> diags;
    Reader r(diags);
    const auto dot = key.find('.');
    const auto head = key.substr(0, dot);
    const auto field = dot == std::string::npos ? std::string() : key.substr(dot + 1);

    if (head == "params" && !field.empty()) {
        json obj{{field, patch}};
        read_params(r, obj, s.params);
    } else if (head == "faults" && !field.empty()) {
        json obj{{field, patch}};
        read_faults(r, obj, s.faults);
    } else if (key == "seed" || key == "timeout" || key == "max_time") {
        json obj{{key, patch}};
        if (key == "seed") r.uint(obj, "seed", "override", s.seed);
        if (key == "timeout") r.uint(obj, "timeout", "override", s.gate_timeout);
        if (key == "max_time") r.uint(obj, "max_time", "override", s.max_time);
    } else {
        diags.push_back("override '" + key + "': unknown key");
    }
    for (auto& d : validate(s)) diags.push_back(std::move(d));
    if (!diags.empty()) throw ScenarioError(std::move(diags));
}

std::vector<ScheduledRequest> expand_schedule(const Scenario& s) {
    struct Item {
        std::uint64_t at;
        std::size_t order;
        ScheduledRequest req;
        bool scripted;
    };

    std::map<std::string, std::size_t> user_index;
    for (std::size_t i = 0; i < s.users.size(); ++i) user_index[s.users[i].key()] = i;

    std::vector<Item> items;
    std::size_t order = 0;
    for (const auto& q : s.requests) {
        const auto it = user_index.find(q.user + "@" + q.domain);
        if (it == user_index.end()) throw ScenarioError({"request references undeclared user '" + q.user + "'"});
        for (std::uint32_t k = 0; k < q.repeat; ++k) {
            ScheduledRequest r;
            r.user_index = it->second;
            r.at = q.at + k * q.interval;
            r.service = q.service;
            r.password = q.password.value_or(s.users[it->second].password);
            if (q.conduct) r.conduct = *q.conduct;
            items.push_back(Item{r.at, order++, r, q.conduct.has_value()});
        }
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.at != b.at ? a.at < b.at : a.order < b.order; });

    // Each user's profile supplies the conduct of its unscripted requests,
    // in schedule order.
    std::vector<std::size_t> unscripted(s.users.size(), 0);
    for (const auto& item : items)
        if (!item.scripted) ++unscripted[item.req.user_index];
    std::vector<std::vector<trust::ActionKind>> behavior(s.users.size());
    for (std::size_t u = 0; u < s.users.size(); ++u)
        behavior[u] = generate_behavior(s.users[u].profile, derive_seed(s.seed, u), unscripted[u]);

    std::vector<std::size_t> cursor(s.users.size(), 0);
    std::vector<ScheduledRequest> out;
    out.reserve(items.size());
    for (auto& item : items) {
        auto r = item.req;
        r.req_id = out.size() + 1;
        if (!item.scripted) r.conduct = behavior[r.user_index][cursor[r.user_index]++];
        out.push_back(std::move(r));
    }
    return out;
}

std::uint64_t effective_max_time(const Scenario& s, const std::vector<ScheduledRequest>& schedule) {
    if (s.max_time != 0) return s.max_time;
    std::uint64_t last = 0;
    for (const auto& r : schedule) last = std::max(last, r.at);
    const auto request = agents::Timeouts::from_gate(s.gate_timeout).request;
    // Every request ends within one request timeout of its submission, and a
    // user's requests run one after another.
    return last + (schedule.size() + 2) * request;
}

} // namespace trustgate::harness
