#include "trustgate/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "trustgate/harness/simulation.hpp"

namespace trustgate::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("trustgate", sink);
    logger->set_pattern("[%l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("TRUSTGATE_LOG")) level = spdlog::level::from_str(env);
    logger->set_level(level);
    return logger;
}

ordered_json verdict_json(const harness::Verdict& v) {
    ordered_json j;
    j["conformant"] = v.conformant();
    j["incomplete"] = v.incomplete;
    j["nonconformant"] = ordered_json::array();
    for (const auto& l : v.lifecycles) {
        if (l.conformant) continue;
        j["nonconformant"].push_back(ordered_json{{"req_id", l.req_id},
                                                  {"seq", l.offending_seq},
                                                  {"msg", l.offending_msg},
                                                  {"reason", l.reason}});
    }
    j["violations"] = ordered_json::array();
    for (const auto& x : v.violations)
        j["violations"].push_back(
            ordered_json{{"property", x.property}, {"seq", x.seq}, {"req_id", x.req_id}, {"detail", x.detail}});
    return j;
}

int exit_for(const harness::Verdict& v) {
    if (!v.violations.empty() || !protocol::all_conformant(v.lifecycles)) return kViolation;
    // Unjudged rather than unsafe: the time bound was too small.
    if (!v.incomplete.empty()) return kInternalError;
    return kOk;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void summarize(std::ostream& err, const std::string& label, const harness::Metrics& m, const harness::Verdict& v) {
    err << label << ": " << m.scheduled << " requests, " << m.granted << " granted, " << m.rejections()
        << " rejected, " << m.timeouts << " timed out, " << m.breaches_detected << " breaches, "
        << m.users_removed << " removed; " << (v.ok() ? "all checks passed" : "CHECKS FAILED") << "\n";
    for (const auto& l : v.lifecycles)
        if (!l.conformant)
            err << "  request " << l.req_id << ": " << l.reason << " (event " << l.offending_seq << ")\n";
    for (const auto& x : v.violations) err << "  " << x.property << " at event " << x.seq << ": " << x.detail << "\n";
    if (!v.incomplete.empty()) err << "  incomplete trace: " << v.incomplete << "\n";
}

struct RunJob {
    std::string path;
    harness::Scenario scenario;
    harness::RunResult result;
    std::string error;
};

int cmd_run(const std::vector<std::string>& paths, const std::optional<std::uint64_t>& seed,
            const std::string& out_dir, const std::vector<std::string>& overrides, unsigned jobs, std::ostream& out,
            std::ostream& err, spdlog::logger& log) {
    std::vector<RunJob> work(paths.size());
    bool bad_input = false;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        work[i].path = paths[i];
        try {
            auto s = harness::load_scenario_file(paths[i]);
            if (seed) s.seed = *seed;
            for (const auto& o : overrides) harness::apply_override(s, o);
            work[i].scenario = std::move(s);
        } catch (const harness::ScenarioError& e) {
            bad_input = true;
            err << paths[i] << ": invalid scenario\n";
            for (const auto& d : e.diagnostics()) err << "  " << d << "\n";
        }
    }
    if (bad_input) return kInvalidInput;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            try {
                work[i].result = harness::run_scenario(work[i].scenario);
            } catch (const std::exception& e) {
                work[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    fs::create_directories(out_dir);
    int code = kOk;
    ordered_json report;
    report["runs"] = ordered_json::array();
    for (const auto& job : work) {
        if (!job.error.empty()) {
            err << job.path << ": internal error: " << job.error << "\n";
            if (code != kViolation) code = kInternalError;
            continue;
        }
        const auto stem = fs::path(job.path).stem().string();
        const auto base = fs::path(out_dir) / stem;
        write_file(base.string() + ".trace.jsonl", protocol::to_jsonl(job.result.trace));
        write_file(base.string() + ".metrics.json", harness::to_json(job.result.metrics));
        std::string audit;
        for (const auto& [domain, entries] : job.result.audit) audit += agents::to_jsonl(entries);
        write_file(base.string() + ".audit.jsonl", audit);
        log.info("{}: wrote {} trace events under {}", job.path, job.result.trace.events.size(), out_dir);

        ordered_json entry;
        entry["scenario"] = job.scenario.name;
        entry["file"] = job.path;
        entry["seed"] = job.scenario.seed;
        entry["ok"] = job.result.verdict.ok();
        entry["verdict"] = verdict_json(job.result.verdict);
        entry["metrics"] = ordered_json::parse(harness::to_json(job.result.metrics));
        report["runs"].push_back(entry);

        summarize(err, job.scenario.name, job.result.metrics, job.result.verdict);
        const int c = exit_for(job.result.verdict);
        // Violations outrank an unjudged run.
        if (c == kViolation || (code != kViolation && c > code)) code = c;
    }
    out << report.dump(2) << "\n";
    return code;
}

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
    protocol::Trace trace;
    try {
        trace = protocol::parse_jsonl(read_file(path));
    } catch (const Error& e) {
        err << path << ": " << e.what() << "\n";
        return kInvalidInput;
    }
    const auto verdict = harness::judge(trace);
    const auto metrics = harness::compute_metrics(trace);

    ordered_json j;
    j["trace"] = path;
    j["ok"] = verdict.ok();
    j["verdict"] = verdict_json(verdict);
    j["metrics"] = ordered_json::parse(harness::to_json(metrics));
    out << j.dump(2) << "\n";
    summarize(err, path, metrics, verdict);
    return exit_for(verdict);
}

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
    int code = kOk;
    ordered_json j;
    j["files"] = ordered_json::array();
    for (const auto& path : paths) {
        ordered_json entry{{"file", path}, {"valid", true}, {"diagnostics", ordered_json::array()}};
        try {
            harness::load_scenario_file(path);
            err << path << ": ok\n";
        } catch (const harness::ScenarioError& e) {
            code = kInvalidInput;
            entry["valid"] = false;
            err << path << ": invalid\n";
            for (const auto& d : e.diagnostics()) {
                entry["diagnostics"].push_back(d);
                err << "  " << d << "\n";
            }
        }
        j["files"].push_back(entry);
    }
    out << j.dump(2) << "\n";
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);

    CLI::App app{"Simulate and check the trust-gated mobile agent access protocol"};
    app.require_subcommand(1);

    std::vector<std::string> run_paths;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    unsigned jobs = 1;
    auto* run_cmd = app.add_subcommand("run", "Run scenarios, write trace, metrics and audit log");
    run_cmd->add_option("scenario", run_paths, "Scenario file(s)")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--out-dir", out_dir, "Directory for output files");
    run_cmd->add_option("--param", overrides, "Override key=value, e.g. params.level=2");
    run_cmd->add_option("--jobs", jobs, "Scenarios to run in parallel")->check(CLI::PositiveNumber);

    std::string trace_path;
    auto* replay_cmd = app.add_subcommand("replay", "Re-check a stored trace");
    replay_cmd->add_option("trace", trace_path, "Trace file (JSON lines)")->required();

    std::vector<std::string> validate_paths;
    auto* validate_cmd = app.add_subcommand("validate", "Check scenario files without running them");
    validate_cmd->add_option("scenario", validate_paths, "Scenario file(s)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*run_cmd) return cmd_run(run_paths, seed, out_dir, overrides, jobs, out, err, *log);
        if (*replay_cmd) return cmd_replay(trace_path, out, err);
        if (*validate_cmd) return cmd_validate(validate_paths, out, err);
    } catch (const std::exception& e) {
        log->error("{}", e.what());
        return kInternalError;
    }
    return kInternalError;
}

} // namespace trustgate::cli
