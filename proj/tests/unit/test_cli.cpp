#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trustgate/cli/cli.hpp"

using namespace trustgate;
namespace cli = trustgate::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = trustgate::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("trustgate-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::string read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string kHonest = std::string(TRUSTGATE_SCENARIO_DIR) + "/honest.json";

} // namespace

TEST_CASE("run on an honest scenario succeeds and writes outputs") {
    const auto dir = scratch("run");
    const auto r = invoke({"run", kHonest, "--out-dir", dir.string()});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(dir / "honest.metrics.json"));
    CHECK(fs::exists(dir / "honest.trace.jsonl"));
    CHECK(fs::exists(dir / "honest.audit.jsonl"));
    CHECK(r.out.find("\"granted\": 3") != std::string::npos);
}

TEST_CASE("run on a missing file is invalid input") {
    CHECK(invoke({"run", "/nonexistent/scenario.json", "--out-dir", scratch("missing").string()}).code ==
          cli::kInvalidInput);
}

TEST_CASE("run with a broken agent reports a violation") {
    const auto dir = scratch("faulty");
    auto text = read(kHonest);
    text.insert(text.rfind('}'), ", \"faulty_agent\": \"proxy_skips_user_gate\"\n");
    write(dir / "faulty.json", text);
    const auto r = invoke({"run", (dir / "faulty.json").string(), "--out-dir", dir.string()});
    CHECK(r.code == cli::kViolation);
    CHECK(r.out.find("user_gate") != std::string::npos);
}

TEST_CASE("seed and param overrides apply") {
    const auto dir = scratch("override");
    const auto r = invoke({"run", kHonest, "--out-dir", dir.string(), "--seed", "5", "--param",
                        "params.user_threshold=0.9"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("\"seed\": 5") != std::string::npos);
    CHECK(r.out.find("\"rejected_user_gate\": 3") != std::string::npos);
    CHECK(invoke({"run", kHonest, "--out-dir", dir.string(), "--param", "params.level=-1"}).code == cli::kInvalidInput);
}

TEST_CASE("replay is idempotent and catches damage") {
    const auto dir = scratch("replay");
    REQUIRE(invoke({"run", kHonest, "--out-dir", dir.string()}).code == cli::kOk);
    const auto trace = dir / "honest.trace.jsonl";

    const auto first = invoke({"replay", trace.string()});
    const auto second = invoke({"replay", trace.string()});
    CHECK(first.code == cli::kOk);
    CHECK(first.out == second.out);
    CHECK(first.err == second.err);

    auto text = read(trace);
    write(dir / "garbled.jsonl", text.substr(0, text.size() / 2) + "}{\n");
    CHECK(invoke({"replay", (dir / "garbled.jsonl").string()}).code == cli::kInvalidInput);

    // A well-formed edit that turns the user gate's answer around.
    const auto at = text.find("\"detail\":\"trusted\"");
    REQUIRE(at != std::string::npos);
    auto flipped = text;
    flipped.replace(at, 18, "\"detail\":\"not_trusted\"");
    write(dir / "flipped.jsonl", flipped);
    CHECK(invoke({"replay", (dir / "flipped.jsonl").string()}).code == cli::kViolation);
}

TEST_CASE("validate reports every diagnostic") {
    const auto dir = scratch("validate");
    CHECK(invoke({"validate", kHonest}).code == cli::kOk);

    write(dir / "unknown_domain.json", R"({"schema_version": 1, "domains": [{"id": "acme"}],
        "users": [{"id": "carol", "domain": "elsewhere"}]})");
    auto r = invoke({"validate", (dir / "unknown_domain.json").string()});
    CHECK(r.code == cli::kInvalidInput);
    CHECK(r.out.find("carol") != std::string::npos);

    write(dir / "extra_key.json", R"({"schema_version": 1, "domains": [], "colour": "blue"})");
    r = invoke({"validate", (dir / "extra_key.json").string()});
    CHECK(r.code == cli::kInvalidInput);
    CHECK(r.out.find("colour") != std::string::npos);
}

TEST_CASE("argument errors are invalid input and help is success") {
    CHECK(invoke({}).code == cli::kInvalidInput);
    CHECK(invoke({"bogus"}).code == cli::kInvalidInput);
    CHECK(invoke({"run"}).code == cli::kInvalidInput);
    CHECK(invoke({"--help"}).code == cli::kOk);
}
