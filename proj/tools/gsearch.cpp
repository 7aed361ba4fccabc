// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: search, eval, baselines, derive, report.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsearch/gsearch.hpp"

namespace {

void add_backend_flags(CLI::App* cmd, gsearch::RunConfig& config) {
    cmd->add_option("--backend", config.backend, "Backend kind: http or scripted")
        ->check(CLI::IsMember({"http", "scripted"}));
    cmd->add_option("--base-url", config.base_url, "Chat-completions server base URL");
    cmd->add_option("--model", config.model, "Model name sent with each request");
    cmd->add_option("--api-key-env", config.api_key_env,
                    "Environment variable holding the API credential");
    cmd->add_option("--call-timeout", config.call_timeout_seconds,
                    "Per-HTTP-call timeout in seconds");
    cmd->add_option("--max-attempts", config.max_attempts, "Retry attempts per call");
    cmd->add_option("--concurrency", config.concurrency, "Max in-flight backend calls");
    cmd->add_option("--script", config.script_path, "Rule file for the scripted backend");
    cmd->add_option_function<std::vector<std::string>>(
        "--price",
        [&config](const std::vector<std::string>& overrides) {
            for (const auto& entry : overrides) {
                auto eq = entry.find('=');
                auto comma = entry.find(',', eq == std::string::npos ? 0 : eq);
                if (eq == std::string::npos || comma == std::string::npos)
                    throw CLI::ValidationError("--price expects model=input,output (per 1M)");
                gsearch::ModelPrice price;
                price.input_per_million = std::stod(entry.substr(eq + 1, comma - eq - 1));
                price.output_per_million = std::stod(entry.substr(comma + 1));
                config.prices[entry.substr(0, eq)] = price;
            }
        },
        "Price override, model=input,output dollars per 1M tokens (repeatable)");
}

void add_eval_flags(CLI::App* cmd, gsearch::RunConfig& config) {
    cmd->add_option("--dataset", config.dataset_path, "JSON-lines dataset of id/question/gold");
    cmd->add_option("--split-seed", config.split_seed, "Seed for the validation sample");
    cmd->add_option_function<std::size_t>(
        "--sample-size", [&config](std::size_t n) { config.sample_size = n; },
        "Sample this many tasks from the dataset (default: all)");
    cmd->add_flag("--judge", config.use_judge, "Use an LLM judge for non-exact matches");
    cmd->add_option("--judge-model", config.judge_model, "Model for the equivalence judge");
    cmd->add_option("--run-timeout", config.run_timeout_seconds,
                    "Per-task execution deadline in seconds");
    cmd->add_option("--grammar", config.grammar_path, "Grammar file (default: embedded)");
    cmd->add_option("--prompts", config.prompts_path, "Prompt catalog JSON (default: embedded)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grammar-constrained search over multi-agent LLM systems"};
    app.require_subcommand(1);

    gsearch::RunConfig config;
    std::string sequence_text;
    std::string strategy = "forced";
    std::string log_path;

    CLI::App* search = app.add_subcommand("search", "Search the grammar for the best system");
    add_backend_flags(search, config);
    add_eval_flags(search, config);
    search->add_option("--run-dir", config.run_dir, "Directory for logs and artifacts")
        ->required();
    search->add_option("--iterations", config.search.iterations, "Outer search iterations");
    search->add_option("--strategy", strategy, "forced or random")
        ->check(CLI::IsMember({"forced", "random"}));
    search->add_option("--seed", config.search.rng_seed, "Sampler seed");
    search->add_option("--max-depth", config.search.max_depth,
                       "Rule applications before a partial expansion restarts");
    search->add_option("--resample-budget", config.search.resample_budget,
                       "Sampling attempts before a forcing step is skipped");
    search->add_option("--trials", config.search.trials_per_problem,
                       "Trials per problem during validation");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate one component sequence");
    add_backend_flags(eval, config);
    add_eval_flags(eval, config);
    eval->add_option("sequence", sequence_text, "Sequence in token notation")->required();
    eval->add_option("--trials", config.trials, "Trials per problem");
    eval->add_option("--run-dir", config.run_dir, "Directory for reports and transcripts");

    CLI::App* baselines = app.add_subcommand("baselines", "Print the four named baselines");

    CLI::App* derive = app.add_subcommand("derive", "Print a sequence's production chain");
    derive->add_option("sequence", sequence_text, "Sequence in token notation")->required();
    derive->add_option("--grammar", config.grammar_path, "Grammar file (default: embedded)");

    CLI::App* report = app.add_subcommand("report", "Summarize a search log");
    report->add_option("log", log_path, "Path to search.log.jsonl")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : gsearch::kExitConfig;
    }

    config.search.strategy = gsearch::strategy_from_name(strategy);

    if (search->parsed()) return gsearch::cmd_search(config, std::cout, std::cerr);
    if (eval->parsed()) return gsearch::cmd_eval(sequence_text, config, std::cout, std::cerr);
    if (baselines->parsed()) return gsearch::cmd_baselines(std::cout);
    if (derive->parsed()) {
        if (config.grammar_path.empty())
            return gsearch::cmd_derive(sequence_text, std::cout, std::cerr);
        gsearch::GrammarSpec grammar = gsearch::detail::load_grammar(config);
        return gsearch::cmd_derive(sequence_text, std::cout, std::cerr, &grammar);
    }
    if (report->parsed()) return gsearch::cmd_report(log_path, std::cout, std::cerr);
    return gsearch::kExitConfig;
}
