// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsearch/executor.hpp"
#include "gsearch/rng.hpp"

namespace gsearch {

struct TaskRecord {
    std::string id;
    std::string question;
    std::string gold;
};

/// Loads a JSON-lines dataset of {id, question, gold} records. An optional
/// "options" array (multiple-choice datasets) is rendered into the question
/// as lettered choices, with gold expected to be the letter. When
/// sample_size is given, a uniform sample without replacement is drawn,
/// deterministic in split_seed; otherwise file order is preserved.
inline std::vector<TaskRecord> load_dataset(const std::string& path, std::uint64_t split_seed = 0,
                                            std::optional<std::size_t> sample_size = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset: " + path);

    std::vector<TaskRecord> records;
    std::map<std::string, long> seen_ids;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what(),
                             line_no);
        }
        auto field = [&](const char* name) {
            if (!doc.contains(name) || !doc[name].is_string() ||
                doc[name].get<std::string>().empty())
                throw ParseError("dataset line " + std::to_string(line_no) +
                                     ": missing or empty field '" + name + "'",
                                 line_no);
            return doc[name].get<std::string>();
        };
        TaskRecord r{field("id"), field("question"), field("gold")};
        if (doc.contains("options")) {
            if (!doc["options"].is_array() || doc["options"].size() > 26)
                throw ParseError("dataset line " + std::to_string(line_no) +
                                     ": options must be an array of at most 26 strings",
                                 line_no);
            std::string block = "\n\nOptions:\n";
            char letter = 'A';
            for (const auto& opt : doc["options"]) {
                if (!opt.is_string())
                    throw ParseError("dataset line " + std::to_string(line_no) +
                                         ": options must be strings",
                                     line_no);
                block += letter;
                block += ") ";
                block += opt.get<std::string>();
                block += '\n';
                ++letter;
            }
            r.question += block;
        }
        if (!seen_ids.emplace(r.id, line_no).second)
            throw ParseError("dataset line " + std::to_string(line_no) + ": duplicate id '" +
                                 r.id + "' (first seen on line " +
                                 std::to_string(seen_ids[r.id]) + ")",
                             line_no);
        records.push_back(std::move(r));
    }

    if (sample_size) {
        if (*sample_size > records.size())
            throw ConfigError("sample_size " + std::to_string(*sample_size) + " exceeds corpus (" +
                              std::to_string(records.size()) + " records)");
        SeededRng rng(split_seed);
        rng.partial_shuffle(records, *sample_size);
        records.resize(*sample_size);
    }
    return records;
}

/// Pulls the payload of the last brace-balanced \boxed{...} in the text,
/// counting nested braces. Returns nothing when no balanced box exists.
inline std::optional<std::string> extract_answer(const std::string& content) {
    const std::string marker = "\\boxed{";
    std::size_t at = content.rfind(marker);
    while (at != std::string::npos) {
        int depth = 1;
        for (std::size_t i = at + marker.size(); i < content.size(); ++i) {
            if (content[i] == '{') ++depth;
            if (content[i] == '}' && --depth == 0)
                return content.substr(at + marker.size(), i - at - marker.size());
        }
        if (at == 0) break;
        at = content.rfind(marker, at - 1);
    }
    return std::nullopt;
}

namespace detail {

inline std::string normalize_answer(std::string s) {
    auto trim = [](std::string& x) {
        std::size_t b = x.find_first_not_of(" \t\r\n");
        std::size_t e = x.find_last_not_of(" \t\r\n");
        x = b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
    };
    trim(s);
    while (s.size() >= 2 && s.front() == '$' && s.back() == '$') {
        s = s.substr(1, s.size() - 2);
        trim(s);
    }
    std::string out;
    bool in_space = false;
    for (char c : s) {
        bool space = c == ' ' || c == '\t' || c == '\r' || c == '\n';
        if (space) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    return out;
}

}  // namespace detail

struct JudgeOptions {
    std::string model;  // empty = backend default
    std::string prompt_template =
        "Decide whether the two answers below to the same math problem are equivalent.\n\n"
        "Answer A: {a}\nAnswer B: {b}\n\n"
        "Reply with exactly YES or NO.";
};

/// Scores a prediction against gold. Absent predictions are wrong. After
/// normalization (trim, collapse whitespace runs, strip $ pairs) exact
/// matches are right without consulting anyone; on mismatch a judge, when
/// given, gets one strict YES/NO call. Judge failure or an unparseable
/// verdict scores wrong (fail-closed).
inline bool check_equivalence(const std::optional<std::string>& predicted,
                              const std::string& gold, LLMBackend* judge = nullptr,
                              const JudgeOptions& jopts = {}) {
    if (gold.empty()) throw ConfigError("gold answer must be non-empty");
    if (!predicted.has_value()) return false;

    std::string a = detail::normalize_answer(*predicted);
    std::string b = detail::normalize_answer(gold);
    if (a == b) return true;
    if (!judge) return false;

    std::string prompt = jopts.prompt_template;
    detail::replace_first(prompt, "{a}", a);
    detail::replace_first(prompt, "{b}", b);
    ChatRequest request;
    request.model = jopts.model;
    request.system_text = "assistant";
    request.user_text = prompt;
    request.temperature = 0.0;
    request.request_tag = "judge/equivalence";
    std::string verdict;
    try {
        verdict = judge->complete(request).content;
    } catch (const Error& e) {
        warn(std::string("equivalence judge failed, scoring incorrect: ") + e.what());
        return false;
    }
    std::size_t b0 = verdict.find_first_not_of(" \t\r\n");
    if (b0 == std::string::npos) {
        warn("equivalence judge returned an empty verdict, scoring incorrect");
        return false;
    }
    std::size_t b1 = verdict.find_first_of(" \t\r\n.,!", b0);
    std::string word = verdict.substr(b0, b1 == std::string::npos ? verdict.size() - b0
                                                                  : b1 - b0);
    for (char& c : word) c = char(std::toupper(static_cast<unsigned char>(c)));
    if (word == "YES") return true;
    if (word == "NO") return false;
    warn("equivalence judge verdict '" + word + "' is neither YES nor NO, scoring incorrect");
    return false;
}

enum class TrialOutcome { Correct, Incorrect, Timeout };

inline std::string to_string(TrialOutcome o) {
    switch (o) {
        case TrialOutcome::Correct: return "correct";
        case TrialOutcome::Incorrect: return "incorrect";
        case TrialOutcome::Timeout: return "timeout";
    }
    return "?";
}

struct EvalReport {
    ComponentSequence sequence;
    std::map<std::string, std::vector<TrialOutcome>> per_problem;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double dollars = 0.0;  // runs plus judge
    long calls = 0;        // sum of per-run call counts
    long judge_calls = 0;
    int trials = 0;
};

struct EvalOptions {
    const GrammarSpec* grammar = nullptr;
    const PromptCatalog* catalog = nullptr;
    double timeout_seconds = 300.0;
    JudgeOptions judge;
};

/// Runs the sequence on every task `trials` times; per-trial accuracy is
/// the fraction of tasks answered correctly, and the report's mean/std are
/// taken over trials (std is the sample deviation, 0 for a single trial).
/// Timeouts and failed runs score incorrect; only configuration errors
/// propagate.
inline EvalReport evaluate_sequence(const ComponentSequence& seq,
                                    const std::vector<TaskRecord>& tasks, int trials,
                                    LLMBackend& backend, LLMBackend* judge = nullptr,
                                    const EvalOptions& opts = {}) {
    if (trials < 1) throw ConfigError("trials must be positive");
    if (tasks.empty()) throw ConfigError("no tasks to evaluate");

    ExecuteOptions xopts;
    xopts.grammar = opts.grammar;
    xopts.catalog = opts.catalog;
    xopts.timeout_seconds = opts.timeout_seconds;

    // The judge runs through its own scope so its spend is itemized exactly,
    // even when it shares a backend with the runs.
    std::optional<RunScope> judge_scope;
    if (judge) {
        judge_scope.emplace(*judge, 0.0);
        judge_scope->set_prefix("judge/");
    }

    EvalReport report;
    report.sequence = seq;
    report.trials = trials;

    std::vector<double> trial_accuracies;
    for (int trial = 0; trial < trials; ++trial) {
        std::size_t correct = 0;
        for (const auto& task : tasks) {
            TrialOutcome outcome = TrialOutcome::Incorrect;
            try {
                ExecutionResult run = execute(seq, make_task(task.question), backend, xopts);
                report.calls += run.call_count;
                report.dollars += run.cost;
                auto answer = extract_answer(run.final.content);
                bool ok = check_equivalence(answer, task.gold,
                                            judge ? &*judge_scope : nullptr, opts.judge);
                outcome = ok ? TrialOutcome::Correct : TrialOutcome::Incorrect;
            } catch (const TimeoutError& e) {
                warn("task '" + task.id + "' trial " + std::to_string(trial + 1) +
                     " timed out: " + e.what());
                outcome = TrialOutcome::Timeout;
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                warn("task '" + task.id + "' trial " + std::to_string(trial + 1) +
                     " failed: " + e.what());
            }
            if (outcome == TrialOutcome::Correct) ++correct;
            report.per_problem[task.id].push_back(outcome);
        }
        trial_accuracies.push_back(double(correct) / double(tasks.size()));
    }

    double mean = 0.0;
    for (double a : trial_accuracies) mean += a;
    mean /= double(trial_accuracies.size());
    double var = 0.0;
    if (trial_accuracies.size() > 1) {
        for (double a : trial_accuracies) var += (a - mean) * (a - mean);
        var /= double(trial_accuracies.size() - 1);
    }
    report.accuracy_mean = mean;
    report.accuracy_std = std::sqrt(var);
    if (judge_scope) {
        report.judge_calls = long(judge_scope->ledger().size());
        report.dollars += judge_scope->ledger().total();
    }
    return report;
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json per;
    for (const auto& [id, outcomes] : report.per_problem) {
        nlohmann::json list = nlohmann::json::array();
        for (auto o : outcomes) list.push_back(to_string(o));
        per[id] = list;
    }
    return {
        {"sequence", report.sequence.text()},
        {"accuracy_mean", report.accuracy_mean},
        {"accuracy_std", report.accuracy_std},
        {"dollars", report.dollars},
        {"calls", report.calls},
        {"judge_calls", report.judge_calls},
        {"trials", report.trials},
        {"per_problem", per},
    };
}

/// Aligned one-line-per-metric table for terminals.
inline std::string render_report(const EvalReport& report) {
    std::ostringstream out;
    out << std::fixed;
    out << "sequence : " << report.sequence.text() << '\n';
    out << "accuracy : " << std::setprecision(4) << report.accuracy_mean << " +/- "
        << report.accuracy_std << " (" << report.trials << " trials)\n";
    out << "cost     : $" << std::setprecision(6) << report.dollars << '\n';
    out << "calls    : " << report.calls << " (+" << report.judge_calls << " judge)\n";
    return out.str();
}

}  // namespace gsearch
