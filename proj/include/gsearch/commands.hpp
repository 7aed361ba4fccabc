// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "gsearch/http_backend.hpp"
#include "gsearch/recording_backend.hpp"
#include "gsearch/recognize.hpp"
#include "gsearch/scripted_backend.hpp"
#include "gsearch/search.hpp"

namespace gsearch {

/// Exit codes shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,    // usage, config, dataset, parse problems
    kExitBackend = 2,   // transport, protocol, pricing, deadline problems
    kExitRejected = 3,  // sequence not in the grammar
};

/// Everything a run needs, resolvable from CLI flags. A frozen JSON copy
/// goes into the run directory before the first call.
struct RunConfig {
    // backend
    std::string backend = "http";  // "http" or "scripted"
    std::string base_url = "https://api.openai.com";
    std::string model = "gpt-4o-mini";
    std::string api_key_env = "OPENAI_API_KEY";
    double call_timeout_seconds = 120.0;
    int max_attempts = 5;
    int concurrency = 8;
    std::string script_path;  // rule file for the scripted backend
    PriceTable prices = default_price_table();

    // grammar and prompts
    std::string grammar_path;  // empty: embedded default grammar
    std::string prompts_path;  // empty: embedded instruction strings

    // search
    SearchConfig search;

    // evaluation
    std::string dataset_path;
    std::uint64_t split_seed = 0;
    std::optional<std::size_t> sample_size;
    int trials = 5;
    bool use_judge = false;
    std::string judge_model;  // empty: backend default model
    double run_timeout_seconds = 300.0;

    std::string run_dir;
};

namespace detail {

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json prices;
    for (const auto& [model, p] : c.prices)
        prices[model] = {{"input_per_million", p.input_per_million},
                         {"output_per_million", p.output_per_million}};
    return {
        {"backend", c.backend},
        {"base_url", c.base_url},
        {"model", c.model},
        {"api_key_env", c.api_key_env},
        {"call_timeout_seconds", c.call_timeout_seconds},
        {"max_attempts", c.max_attempts},
        {"concurrency", c.concurrency},
        {"script_path", c.script_path},
        {"prices", prices},
        {"grammar_path", c.grammar_path},
        {"prompts_path", c.prompts_path},
        {"search",
         {{"iterations", c.search.iterations},
          {"strategy", to_string(c.search.strategy)},
          {"rng_seed", c.search.rng_seed},
          {"max_depth", c.search.max_depth},
          {"resample_budget", c.search.resample_budget},
          {"trials_per_problem", c.search.trials_per_problem}}},
        {"dataset_path", c.dataset_path},
        {"split_seed", c.split_seed},
        {"sample_size", c.sample_size ? nlohmann::json(*c.sample_size) : nlohmann::json()},
        {"trials", c.trials},
        {"use_judge", c.use_judge},
        {"judge_model", c.judge_model},
        {"run_timeout_seconds", c.run_timeout_seconds},
        {"run_dir", c.run_dir},
    };
}

inline std::string rfc3339_utc(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Deterministic runs stamp log records with a logical clock (one tick per
/// record from a fixed epoch) so replays are byte-identical; live runs use
/// the wall clock.
class Timestamper {
   public:
    explicit Timestamper(bool logical) : logical_(logical) {}
    std::string next() {
        if (logical_) return rfc3339_utc(std::time_t(ticks_++));
        return rfc3339_utc(std::time(nullptr));
    }

   private:
    bool logical_;
    std::time_t ticks_ = 0;
};

inline GrammarSpec load_grammar(const RunConfig& config) {
    if (config.grammar_path.empty()) return default_grammar();
    std::ifstream in(config.grammar_path);
    if (!in) throw ConfigError("cannot open grammar file: " + config.grammar_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_grammar(text);
}

inline PromptCatalog load_prompts(const RunConfig& config) {
    if (config.prompts_path.empty()) return PromptCatalog();
    return PromptCatalog::from_file(config.prompts_path);
}

/// Builds a scripted backend from a JSON rule file:
/// {"fallback": "echo"|"fixed"|"error", "fallback_text": "...",
///  "model": "scripted", "rules": [{"contains": "...", "response": "...",
///  "max_calls": 3}, {"matches": "regex", "response": "..."}]}
inline std::unique_ptr<ScriptedBackend> load_script(const std::string& path,
                                                    const PriceTable& prices) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("script file is not valid JSON: ") + e.what());
    }
    auto backend = std::make_unique<ScriptedBackend>(prices);
    if (doc.contains("model")) backend->set_model_name(doc["model"].get<std::string>());
    for (const auto& rule : doc.value("rules", nlohmann::json::array())) {
        int max_calls = rule.value("max_calls", -1);
        std::string response = rule.value("response", "");
        if (rule.contains("contains"))
            backend->when_contains(rule["contains"].get<std::string>(), response, max_calls);
        else if (rule.contains("matches"))
            backend->when_matches(rule["matches"].get<std::string>(), response, max_calls);
        else
            throw ConfigError("script rule needs a 'contains' or 'matches' matcher");
    }
    std::string fallback = doc.value("fallback", "echo");
    if (fallback == "echo")
        backend->fallback_echo();
    else if (fallback == "fixed")
        backend->fallback_fixed(doc.value("fallback_text", ""));
    else if (fallback == "error")
        backend->fallback_error();
    else
        throw ConfigError("unknown script fallback: " + fallback);
    return backend;
}

inline std::unique_ptr<LLMBackend> build_backend(const RunConfig& config) {
    if (config.backend == "scripted") {
        if (config.script_path.empty())
            throw ConfigError("scripted backend needs --script <rule file>");
        return load_script(config.script_path, config.prices);
    }
    if (config.backend != "http")
        throw ConfigError("unknown backend: " + config.backend + " (expected http or scripted)");
    HttpBackendConfig hc;
    hc.base_url = config.base_url;
    hc.default_model = config.model;
    hc.max_attempts = config.max_attempts;
    hc.timeout_seconds = config.call_timeout_seconds;
    hc.max_concurrency = config.concurrency;
    hc.prices = config.prices;
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
        throw ConfigError("no credential: set " + config.api_key_env +
                          " or choose --backend scripted");
    hc.api_key = key;
    return std::make_unique<HttpBackend>(std::move(hc));
}

inline int classify_error(const Error& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    if (dynamic_cast<const StructureError*>(&e)) return kExitRejected;
    if (dynamic_cast<const BackendError*>(&e) || dynamic_cast<const ProtocolError*>(&e) ||
        dynamic_cast<const PricingError*>(&e) || dynamic_cast<const TimeoutError*>(&e))
        return kExitBackend;
    return kExitConfig;
}

}  // namespace detail

/// Prints the four named baseline systems, CoT first.
inline int cmd_baselines(std::ostream& out) {
    for (const auto& entry : base_mases()) out << entry.name << ": " << entry.sequence.text() << '\n';
    return kExitOk;
}

/// Parses a sequence and prints its full production chain, or the
/// recognizer's rejection.
inline int cmd_derive(const std::string& sequence_text, std::ostream& out, std::ostream& err,
                      const GrammarSpec* grammar_override = nullptr) {
    try {
        GrammarSpec grammar = grammar_override ? *grammar_override : default_grammar();
        ComponentSequence seq = parse_sequence_text(sequence_text);
        RecognizeResult result = recognize(grammar, seq);
        if (!result.accepted()) {
            err << "rejected at position " << result.rejection->position << " ("
                << to_string(result.rejection->code) << "): " << result.rejection->message
                << '\n';
            return kExitRejected;
        }
        out << render(grammar, *result.derivation);
        return kExitOk;
    } catch (const Error& e) {
        return detail::classify_error(e, err);
    }
}

/// Runs forced or random search per the config, persisting the frozen
/// config, a JSON-lines log, transcripts, and best.json into the run
/// directory.
inline int cmd_search(const RunConfig& config, std::ostream& out, std::ostream& err,
                      LLMBackend* injected_backend = nullptr,
                      LLMBackend* injected_judge = nullptr) {
    namespace fs = std::filesystem;
    try {
        if (config.run_dir.empty()) throw ConfigError("search needs --run-dir");
        if (config.dataset_path.empty()) throw ConfigError("search needs --dataset");

        GrammarSpec grammar = detail::load_grammar(config);
        validate(grammar);
        PromptCatalog catalog = detail::load_prompts(config);
        std::vector<TaskRecord> tasks =
            load_dataset(config.dataset_path, config.split_seed, config.sample_size);

        fs::create_directories(fs::path(config.run_dir) / "transcripts");
        fs::create_directories(fs::path(config.run_dir) / "reports");

        {
            std::ofstream snapshot(fs::path(config.run_dir) / "config.snapshot");
            if (!snapshot) throw ConfigError("cannot write into run dir: " + config.run_dir);
            snapshot << detail::config_to_json(config).dump(2) << '\n';
        }

        std::unique_ptr<LLMBackend> owned;
        LLMBackend* base = injected_backend;
        if (!base) {
            owned = detail::build_backend(config);
            base = owned.get();
        }
        RecordingBackend backend(*base,
                                 (fs::path(config.run_dir) / "transcripts" / "calls.jsonl")
                                     .string());

        LLMBackend* judge = injected_judge;
        if (!judge && config.use_judge) judge = &backend;

        const bool deterministic = injected_backend != nullptr || config.backend == "scripted";
        detail::Timestamper clock(deterministic);

        std::ofstream log(fs::path(config.run_dir) / "search.log.jsonl");
        if (!log) throw ConfigError("cannot write search log");

        // A separately injected judge spends on its own ledger; a judge that
        // shares the run backend already shows up in the base total.
        const bool separate_judge = injected_judge && injected_judge != base;
        const double base_before = base->ledger().total();
        const double judge_before = separate_judge ? injected_judge->ledger().total() : 0.0;

        SearchObserver observer;
        observer.on_evaluation = [&](const HistoryRecord& rec) {
            nlohmann::json line = {
                {"event", "evaluation"},
                {"iteration", rec.iteration},
                {"forced", rec.forced ? nlohmann::json(rec.forced->token()) : nlohmann::json()},
                {"sequence", rec.sequence.text()},
                {"score", rec.score},
                {"dollars", rec.dollars},
                {"timestamp", clock.next()},
            };
            log << line.dump() << '\n';
            log.flush();
        };
        observer.on_skip = [&](int iteration, const ComponentTerm& component,
                               const std::string& why) {
            nlohmann::json line = {
                {"event", "skip"},
                {"iteration", iteration},
                {"forced", component.token()},
                {"reason", why},
                {"timestamp", clock.next()},
            };
            log << line.dump() << '\n';
            log.flush();
        };

        EvalOptions eopts;
        eopts.grammar = &grammar;
        eopts.catalog = &catalog;
        eopts.timeout_seconds = config.run_timeout_seconds;
        eopts.judge.model = config.judge_model;

        SearchConfig sc = config.search;
        SearchResult result =
            sc.strategy == SearchStrategy::Forced
                ? forced_search(grammar, tasks, sc, backend, judge, eopts, observer)
                : random_search(grammar, tasks, sc, backend, judge, eopts, observer);

        double evaluated_dollars = 0.0;
        int best_iteration = 0;
        double best_score = 0.0, best_dollars = 0.0;
        for (const auto& rec : result.state.history) {
            evaluated_dollars += rec.dollars;
            if (rec.sequence == result.best && best_iteration == 0) {
                best_iteration = rec.iteration;
                best_score = rec.score;
                best_dollars = rec.dollars;
            }
        }
        double total_spend = (base->ledger().total() - base_before) +
                             (separate_judge ? injected_judge->ledger().total() - judge_before
                                             : 0.0);
        // Sampling sequences from the grammar must never touch the backend;
        // anything the ledger holds beyond the evaluations would be
        // generation spend, and it has to come out to zero.
        double generation_dollars = total_spend - evaluated_dollars;

        nlohmann::json best = {
            {"sequence", result.best.text()},
            {"score", best_score},
            {"dollars", best_dollars},
            {"iteration", best_iteration},
            {"evaluations", result.state.history.size()},
            {"search_dollars", evaluated_dollars},
            {"generation_dollars", generation_dollars},
        };
        {
            std::ofstream log_best(fs::path(config.run_dir) / "best.json");
            log_best << best.dump(2) << '\n';
        }
        nlohmann::json final_line = {{"event", "best"},
                                     {"sequence", result.best.text()},
                                     {"score", best_score},
                                     {"timestamp", clock.next()}};
        log << final_line.dump() << '\n';

        out << "best: " << result.best.text() << '\n';
        out << "score: " << best_score << " (iteration " << best_iteration << ", "
            << result.state.history.size() << " evaluations)\n";
        return kExitOk;
    } catch (const Error& e) {
        return detail::classify_error(e, err);
    }
}

/// Evaluates one sequence (token notation) on a dataset and prints the
/// report; persists JSON when a run directory is configured.
inline int cmd_eval(const std::string& sequence_text, const RunConfig& config, std::ostream& out,
                    std::ostream& err, LLMBackend* injected_backend = nullptr,
                    LLMBackend* injected_judge = nullptr) {
    namespace fs = std::filesystem;
    try {
        if (config.dataset_path.empty()) throw ConfigError("eval needs --dataset");
        GrammarSpec grammar = detail::load_grammar(config);
        validate(grammar);
        PromptCatalog catalog = detail::load_prompts(config);

        ComponentSequence seq = parse_sequence_text(sequence_text);
        RecognizeResult membership = recognize(grammar, seq);
        if (!membership.accepted()) {
            err << "rejected at position " << membership.rejection->position << " ("
                << to_string(membership.rejection->code) << "): "
                << membership.rejection->message << '\n';
            return kExitRejected;
        }

        std::vector<TaskRecord> tasks =
            load_dataset(config.dataset_path, config.split_seed, config.sample_size);

        std::unique_ptr<LLMBackend> owned;
        LLMBackend* backend = injected_backend;
        if (!backend) {
            owned = detail::build_backend(config);
            backend = owned.get();
        }

        std::unique_ptr<RecordingBackend> recording;
        if (!config.run_dir.empty()) {
            fs::create_directories(fs::path(config.run_dir) / "transcripts");
            fs::create_directories(fs::path(config.run_dir) / "reports");
            recording = std::make_unique<RecordingBackend>(
                *backend,
                (fs::path(config.run_dir) / "transcripts" / "eval.calls.jsonl").string());
            backend = recording.get();
        }

        LLMBackend* judge = injected_judge;
        if (!judge && config.use_judge) judge = backend;

        EvalOptions eopts;
        eopts.grammar = &grammar;
        eopts.catalog = &catalog;
        eopts.timeout_seconds = config.run_timeout_seconds;
        eopts.judge.model = config.judge_model;

        EvalReport report = evaluate_sequence(seq, tasks, config.trials, *backend, judge, eopts);
        out << render_report(report);
        if (!config.run_dir.empty()) {
            std::ofstream rep(fs::path(config.run_dir) / "reports" / "eval.json");
            rep << report_to_json(report).dump(2) << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        return detail::classify_error(e, err);
    }
}

/// Summarizes a search log: evaluations, skips, and the top sequences.
inline int cmd_report(const std::string& log_path, std::ostream& out, std::ostream& err,
                      std::size_t top = 5) {
    try {
        std::ifstream in(log_path);
        if (!in) throw ConfigError("cannot open search log: " + log_path);
        struct Row {
            std::string sequence;
            double score;
            double dollars;
            int iteration;
        };
        std::vector<Row> rows;
        std::size_t skips = 0;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("log line " + std::to_string(line_no) + ": " + e.what(),
                                 line_no);
            }
            std::string event = rec.value("event", "evaluation");
            if (event == "skip") ++skips;
            if (event != "evaluation") continue;
            rows.push_back({rec.value("sequence", ""), rec.value("score", 0.0),
                            rec.value("dollars", 0.0), rec.value("iteration", 0)});
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.score > b.score; });
        out << rows.size() << " evaluations, " << skips << " skips\n";
        for (std::size_t i = 0; i < rows.size() && i < top; ++i)
            out << "  " << rows[i].score << "  $" << rows[i].dollars << "  it" << rows[i].iteration
                << "  " << rows[i].sequence << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return detail::classify_error(e, err);
    }
}

}  // namespace gsearch
