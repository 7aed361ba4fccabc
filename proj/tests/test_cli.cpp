// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsearch/commands.hpp"
#include "gsearch/gsearch.hpp"

using namespace gsearch;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("gsearch-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write_dataset(const TempDir& dir) {
    fs::path p = dir.path / "tasks.jsonl";
    write_file(p,
               "{\"id\": \"t1\", \"question\": \"What is 1+1?\", \"gold\": \"2\"}\n"
               "{\"id\": \"t2\", \"question\": \"What is 2+2?\", \"gold\": \"4\"}\n");
    return p;
}

std::unique_ptr<ScriptedBackend> make_backend() {
    auto backend = std::make_unique<ScriptedBackend>();
    backend->when_contains("What is 1+1", "\\boxed{2}").fallback_fixed("\\boxed{0}");
    return backend;
}

RunConfig scripted_run(const TempDir& dir, const fs::path& dataset) {
    RunConfig config;
    config.dataset_path = dataset.string();
    config.run_dir = (dir.path / "run").string();
    config.search.iterations = 1;
    config.search.trials_per_problem = 1;
    config.search.rng_seed = 5;
    config.trials = 1;
    return config;
}

std::vector<nlohmann::json> parse_jsonl(const std::string& text) {
    std::vector<nlohmann::json> records;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) records.push_back(nlohmann::json::parse(line));
    return records;
}

}  // namespace

TEST_CASE("baselines lists the four named systems, CoT first") {
    std::ostringstream out;
    CHECK(cmd_baselines(out) == kExitOk);
    CHECK(out.str() ==
          "CoT: StepByStepReasoner[cnt=1]\n"
          "CoT-SC: StepByStepReasoner[cnt=5] => MajorityVoter\n"
          "Self-Refine: StepByStepReasoner[cnt=1] => SelfCriticIteration[rnds=5]\n"
          "MA-Debate: RoleBasedReasoner[cnt=5] => DebateIteration[rnds=2] => ConsensusBuilder\n");
}

TEST_CASE("derive prints the production chain of a member sequence") {
    std::ostringstream out, err;
    CHECK(cmd_derive("StepByStepReasoner[cnt=1]", out, err) == kExitOk);
    CHECK(out.str() ==
          "System -> StartSI\n"
          "StartSI -> StartSISO\n"
          "StartSISO -> StepByStepReasoner[cnt=1]\n");
    CHECK(err.str().empty());
}

TEST_CASE("derive reports the rejection of a non-member sequence") {
    std::ostringstream out, err;
    CHECK(cmd_derive("MajorityVoter", out, err) == kExitRejected);
    CHECK(out.str().empty());
    CHECK(err.str().find("rejected at position 0 (bad_start)") == 0);
}

TEST_CASE("derive treats an unparseable token as a config problem") {
    std::ostringstream out, err;
    CHECK(cmd_derive("Banana", out, err) == kExitConfig);
    CHECK(err.str().find("error:") == 0);
}

TEST_CASE("search writes its run artifacts") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    auto backend = make_backend();

    std::ostringstream out, err;
    int rc = cmd_search(config, out, err, backend.get());
    INFO(err.str());
    REQUIRE(rc == kExitOk);
    CHECK(err.str().empty());
    CHECK(out.str().find("best: ") == 0);

    fs::path run = config.run_dir;
    REQUIRE(fs::exists(run / "config.snapshot"));
    REQUIRE(fs::exists(run / "search.log.jsonl"));
    REQUIRE(fs::exists(run / "best.json"));
    REQUIRE(fs::exists(run / "transcripts" / "calls.jsonl"));
    REQUIRE(fs::is_directory(run / "reports"));

    nlohmann::json snapshot = nlohmann::json::parse(read_file(run / "config.snapshot"));
    CHECK(snapshot["search"]["iterations"] == 1);
    CHECK(snapshot["dataset_path"] == config.dataset_path);

    auto records = parse_jsonl(read_file(run / "search.log.jsonl"));
    REQUIRE(records.size() == 10);
    double max_score = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(records[i]["event"] == "evaluation");
        CHECK(records[i]["iteration"] == 1);
        max_score = std::max(max_score, records[i]["score"].get<double>());
    }
    CHECK(records[9]["event"] == "best");

    nlohmann::json best = nlohmann::json::parse(read_file(run / "best.json"));
    GrammarSpec g = default_grammar();
    ComponentSequence best_seq = parse_sequence_text(best["sequence"].get<std::string>());
    CHECK(accepts(g, best_seq));
    CHECK(best["score"].get<double>() == max_score);
    CHECK(best["evaluations"] == 9);
    CHECK(best["generation_dollars"].get<double>() == 0.0);

    auto calls = parse_jsonl(read_file(run / "transcripts" / "calls.jsonl"));
    CHECK(!calls.empty());
    for (const auto& call : calls) CHECK(call.contains("tag"));
}

TEST_CASE("two searches with the same config replay byte for byte") {
    TempDir dir;
    fs::path dataset = write_dataset(dir);

    auto run_once = [&](const std::string& name) {
        RunConfig config = scripted_run(dir, dataset);
        config.run_dir = (dir.path / name).string();
        auto backend = make_backend();
        std::ostringstream out, err;
        REQUIRE(cmd_search(config, out, err, backend.get()) == kExitOk);
        return fs::path(config.run_dir);
    };

    fs::path a = run_once("run-a");
    fs::path b = run_once("run-b");

    CHECK(read_file(a / "search.log.jsonl") == read_file(b / "search.log.jsonl"));
    CHECK(read_file(a / "best.json") == read_file(b / "best.json"));
    CHECK(read_file(a / "transcripts" / "calls.jsonl") ==
          read_file(b / "transcripts" / "calls.jsonl"));
}

TEST_CASE("search rejects incomplete configs") {
    TempDir dir;
    auto backend = make_backend();

    RunConfig no_run_dir = scripted_run(dir, write_dataset(dir));
    no_run_dir.run_dir.clear();
    std::ostringstream out1, err1;
    CHECK(cmd_search(no_run_dir, out1, err1, backend.get()) == kExitConfig);
    CHECK(err1.str().find("--run-dir") != std::string::npos);

    RunConfig no_dataset = scripted_run(dir, write_dataset(dir));
    no_dataset.dataset_path.clear();
    std::ostringstream out2, err2;
    CHECK(cmd_search(no_dataset, out2, err2, backend.get()) == kExitConfig);
    CHECK(err2.str().find("--dataset") != std::string::npos);
}

TEST_CASE("a scripted backend without a rule file is refused") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.backend = "scripted";

    std::ostringstream out, err;
    CHECK(cmd_search(config, out, err) == kExitConfig);
    CHECK(err.str().find("--script") != std::string::npos);
    CHECK(fs::exists(fs::path(config.run_dir) / "config.snapshot"));
}

TEST_CASE("a missing credential is a config error naming the variable") {
    ::unsetenv("GSEARCH_NO_SUCH_VAR");
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.backend = "http";
    config.api_key_env = "GSEARCH_NO_SUCH_VAR";

    std::ostringstream out, err;
    CHECK(cmd_search(config, out, err) == kExitConfig);
    CHECK(err.str().find("no credential: set GSEARCH_NO_SUCH_VAR") != std::string::npos);
}

TEST_CASE("search runs end to end from a script rule file") {
    TempDir dir;
    fs::path script = dir.path / "script.json";
    write_file(script, R"({
  "model": "scripted",
  "fallback": "fixed",
  "fallback_text": "\\boxed{0}",
  "rules": [{"contains": "What is 1+1", "response": "\\boxed{2}"}]
})");

    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.backend = "scripted";
    config.script_path = script.string();

    std::ostringstream out, err;
    int rc = cmd_search(config, out, err);
    INFO(err.str());
    REQUIRE(rc == kExitOk);
    auto records = parse_jsonl(read_file(fs::path(config.run_dir) / "search.log.jsonl"));
    CHECK(records.size() == 10);
}

TEST_CASE("a script file with an unknown fallback is refused") {
    TempDir dir;
    fs::path script = dir.path / "script.json";
    write_file(script, R"({"fallback": "panic"})");

    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.backend = "scripted";
    config.script_path = script.string();

    std::ostringstream out, err;
    CHECK(cmd_search(config, out, err) == kExitConfig);
    CHECK(err.str().find("unknown script fallback") != std::string::npos);
}

TEST_CASE("search reads a grammar file and logs forced skips") {
    TempDir dir;
    GrammarSpec reduced = make_grammar({step_by_step(1)}, {step_by_step(1)});
    fs::path grammar_file = dir.path / "reduced.grammar";
    write_file(grammar_file, serialize(reduced));

    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.grammar_path = grammar_file.string();
    config.search.iterations = 2;
    config.search.max_depth = 3;
    config.search.resample_budget = 40;
    auto backend = make_backend();

    std::vector<std::string> warnings;
    auto previous = warn_sink();
    warn_sink() = [&warnings](const std::string& w) { warnings.push_back(w); };
    std::ostringstream out, err;
    int rc = cmd_search(config, out, err, backend.get());
    warn_sink() = previous;
    REQUIRE(rc == kExitOk);

    auto records = parse_jsonl(read_file(fs::path(config.run_dir) / "search.log.jsonl"));
    REQUIRE(records.size() == 3);
    CHECK(records[0]["event"] == "evaluation");
    CHECK(records[0]["sequence"] == "StepByStepReasoner[cnt=1]");
    CHECK(records[1]["event"] == "skip");
    CHECK(records[1]["forced"] == "StepByStepReasoner[cnt=1]");
    CHECK(records[2]["event"] == "best");

    std::ostringstream report_out, report_err;
    CHECK(cmd_report((fs::path(config.run_dir) / "search.log.jsonl").string(), report_out,
                     report_err) == kExitOk);
    CHECK(report_out.str().find("1 evaluations, 1 skips\n") == 0);
}

TEST_CASE("eval scores one sequence and persists a report") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.trials = 2;
    auto backend = make_backend();

    std::ostringstream out, err;
    int rc = cmd_eval("StepByStepReasoner[cnt=5] => MajorityVoter", config, out, err,
                      backend.get());
    INFO(err.str());
    REQUIRE(rc == kExitOk);
    CHECK(out.str().find("StepByStepReasoner[cnt=5] => MajorityVoter") != std::string::npos);

    fs::path run = config.run_dir;
    REQUIRE(fs::exists(run / "reports" / "eval.json"));
    nlohmann::json report = nlohmann::json::parse(read_file(run / "reports" / "eval.json"));
    CHECK(report["accuracy_mean"].get<double>() == 0.5);
    CHECK(report["trials"] == 2);

    auto calls = parse_jsonl(read_file(run / "transcripts" / "eval.calls.jsonl"));
    CHECK(calls.size() == 24);
}

TEST_CASE("eval rejects a sequence outside the grammar before any call") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    auto backend = make_backend();

    std::ostringstream out, err;
    CHECK(cmd_eval("MajorityVoter", config, out, err, backend.get()) == kExitRejected);
    CHECK(err.str().find("rejected at position 0 (bad_start)") != std::string::npos);
    CHECK(backend->call_count() == 0);
}

TEST_CASE("eval without a dataset is refused") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    config.dataset_path.clear();
    auto backend = make_backend();

    std::ostringstream out, err;
    CHECK(cmd_eval("StepByStepReasoner[cnt=1]", config, out, err, backend.get()) == kExitConfig);
    CHECK(err.str().find("--dataset") != std::string::npos);
}

TEST_CASE("report summarizes a search log and refuses a missing one") {
    TempDir dir;
    RunConfig config = scripted_run(dir, write_dataset(dir));
    auto backend = make_backend();
    std::ostringstream out, err;
    REQUIRE(cmd_search(config, out, err, backend.get()) == kExitOk);

    std::ostringstream report_out, report_err;
    CHECK(cmd_report((fs::path(config.run_dir) / "search.log.jsonl").string(), report_out,
                     report_err) == kExitOk);
    std::string summary = report_out.str();
    CHECK(summary.find("9 evaluations, 0 skips\n") == 0);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 6);

    std::ostringstream missing_out, missing_err;
    CHECK(cmd_report((dir.path / "nope.jsonl").string(), missing_out, missing_err) ==
          kExitConfig);
    CHECK(missing_err.str().find("cannot open search log") != std::string::npos);
}
