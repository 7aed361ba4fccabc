// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsearch/eval.hpp"
#include "gsearch/sample.hpp"

namespace gsearch {

enum class SearchStrategy { Forced, Random };

inline std::string to_string(SearchStrategy s) {
    return s == SearchStrategy::Forced ? "forced" : "random";
}

inline SearchStrategy strategy_from_name(std::string_view name) {
    if (name == "forced") return SearchStrategy::Forced;
    if (name == "random") return SearchStrategy::Random;
    throw ConfigError("unknown search strategy: " + std::string(name) +
                      " (expected 'forced' or 'random')");
}

struct SearchConfig {
    int iterations = 30;
    SearchStrategy strategy = SearchStrategy::Forced;
    std::uint64_t rng_seed = 0;
    int max_depth = 16;
    int resample_budget = 10000;
    int trials_per_problem = 5;
};

/// One evaluation event, in logical order.
struct HistoryRecord {
    int iteration = 0;                    // outer iteration, 1-based
    std::optional<ComponentTerm> forced;  // which component this evaluation was for
    ComponentSequence sequence;
    double score = 0.0;
    double dollars = 0.0;
};

struct SearchState {
    std::map<ComponentTerm, long> component_counts;
    std::set<ComponentSequence> evaluated;
    std::map<ComponentSequence, double> scores;
    std::vector<HistoryRecord> history;
};

struct SearchResult {
    ComponentSequence best;
    SearchState state;
};

/// Score and spend of one candidate on the validation set.
struct EvaluationOutcome {
    double score = 0.0;
    double dollars = 0.0;
};

/// How candidates get scored. The stock evaluator runs the validation set
/// (make_validation_evaluator); tests plug in oracles.
using SequenceEvaluator = std::function<EvaluationOutcome(const ComponentSequence&)>;

/// Streaming hooks, all optional. on_evaluation fires once per evaluated
/// candidate in logical order; on_skip reports a forcing step that found no
/// unseen sequence within budget.
struct SearchObserver {
    std::function<void(const HistoryRecord&)> on_evaluation;
    std::function<void(int iteration, const ComponentTerm& component, const std::string& why)>
        on_skip;
};

/// Picks the argmax-score sequence from the history, ties going to the
/// earliest evaluation.
inline ComponentSequence select_best(const SearchState& state) {
    if (state.history.empty()) throw ConfigError("no evaluated sequences to select from");
    const HistoryRecord* best = &state.history.front();
    for (const auto& rec : state.history)
        if (rec.score > best->score) best = &rec;
    return best->sequence;
}

namespace detail {

inline void validate_search_config(const SearchConfig& config) {
    if (config.iterations < 1) throw ConfigError("iterations must be positive");
    if (config.trials_per_problem < 1) throw ConfigError("trials_per_problem must be positive");
}

}  // namespace detail

/// Balanced exploration: each outer iteration finds the components observed
/// fewest so far and forces one unseen sequence containing each, so no
/// component goes unmeasured. Only the forced component's count moves per
/// evaluation. A forcing step that cannot turn up an unseen sequence within
/// the resample budget is skipped (logged, count untouched) rather than
/// spinning forever.
inline SearchResult forced_search_core(const GrammarSpec& grammar, const SearchConfig& config,
                                       const SequenceEvaluator& evaluate,
                                       const SearchObserver& observer = {}) {
    detail::validate_search_config(config);
    SearchState state;
    for (const auto& t : grammar.terminals) state.component_counts[t] = 0;
    if (state.component_counts.empty()) throw ConfigError("grammar declares no terminals");

    SeededRng rng(config.rng_seed);
    SampleOptions sopts{config.max_depth, config.resample_budget};

    for (int iteration = 1; iteration <= config.iterations; ++iteration) {
        long min_count = state.component_counts.begin()->second;
        for (const auto& [_, count] : state.component_counts)
            min_count = std::min(min_count, count);

        // Freeze the forced set before any evaluation this pass, in declared
        // terminal order.
        std::vector<ComponentTerm> forced;
        for (const auto& t : grammar.terminals)
            if (state.component_counts.at(t) == min_count) forced.push_back(t);

        for (const auto& component : forced) {
            std::optional<ComponentSequence> candidate;
            std::string give_up_reason;
            try {
                for (int draw = 0; draw < config.resample_budget; ++draw) {
                    ComponentSequence seq = sample(grammar, rng, sopts);
                    if (seq.contains(component) && !state.evaluated.count(seq)) {
                        candidate = std::move(seq);
                        break;
                    }
                }
                if (!candidate)
                    give_up_reason = "no unseen sequence containing " + component.token() +
                                     " in " + std::to_string(config.resample_budget) + " draws";
            } catch (const SampleBudgetError& e) {
                give_up_reason = e.what();
            }
            if (!candidate) {
                warn("forced search iteration " + std::to_string(iteration) + ": skipping " +
                     component.token() + " (" + give_up_reason + ")");
                if (observer.on_skip) observer.on_skip(iteration, component, give_up_reason);
                continue;
            }

            EvaluationOutcome outcome = evaluate(*candidate);
            HistoryRecord rec{iteration, component, *candidate, outcome.score, outcome.dollars};
            state.evaluated.insert(*candidate);
            state.scores[*candidate] = outcome.score;
            ++state.component_counts[component];
            state.history.push_back(rec);
            if (observer.on_evaluation) observer.on_evaluation(rec);
        }
    }
    return {select_best(state), std::move(state)};
}

/// Baseline strategy: iterations independent draws; a duplicate consumes
/// its iteration without a fresh evaluation.
inline SearchResult random_search_core(const GrammarSpec& grammar, const SearchConfig& config,
                                       const SequenceEvaluator& evaluate,
                                       const SearchObserver& observer = {}) {
    detail::validate_search_config(config);
    SearchState state;
    for (const auto& t : grammar.terminals) state.component_counts[t] = 0;

    SeededRng rng(config.rng_seed);
    SampleOptions sopts{config.max_depth, config.resample_budget};

    for (int iteration = 1; iteration <= config.iterations; ++iteration) {
        ComponentSequence seq = sample(grammar, rng, sopts);
        if (state.evaluated.count(seq)) continue;

        EvaluationOutcome outcome = evaluate(seq);
        HistoryRecord rec{iteration, std::nullopt, seq, outcome.score, outcome.dollars};
        state.evaluated.insert(seq);
        state.scores[seq] = outcome.score;
        for (const auto& t : seq.terms)
            if (state.component_counts.count(t)) ++state.component_counts[t];
        state.history.push_back(rec);
        if (observer.on_evaluation) observer.on_evaluation(rec);
    }
    if (state.history.empty()) throw ConfigError("random search evaluated nothing");
    return {select_best(state), std::move(state)};
}

/// The stock evaluator: validation accuracy via the eval harness, averaged
/// over config trials, with spend carried through.
inline SequenceEvaluator make_validation_evaluator(std::vector<TaskRecord> tasks, int trials,
                                                   LLMBackend& backend,
                                                   LLMBackend* judge = nullptr,
                                                   EvalOptions eval_options = {}) {
    if (tasks.empty()) throw ConfigError("validation set is empty");
    return [tasks = std::move(tasks), trials, &backend, judge,
            eval_options](const ComponentSequence& seq) {
        EvalReport report = evaluate_sequence(seq, tasks, trials, backend, judge, eval_options);
        return EvaluationOutcome{report.accuracy_mean, report.dollars};
    };
}

inline SearchResult forced_search(const GrammarSpec& grammar,
                                  const std::vector<TaskRecord>& validation_set,
                                  const SearchConfig& config, LLMBackend& backend,
                                  LLMBackend* judge = nullptr, EvalOptions eval_options = {},
                                  const SearchObserver& observer = {}) {
    return forced_search_core(
        grammar, config,
        make_validation_evaluator(validation_set, config.trials_per_problem, backend, judge,
                                  eval_options),
        observer);
}

inline SearchResult random_search(const GrammarSpec& grammar,
                                  const std::vector<TaskRecord>& validation_set,
                                  const SearchConfig& config, LLMBackend& backend,
                                  LLMBackend* judge = nullptr, EvalOptions eval_options = {},
                                  const SearchObserver& observer = {}) {
    return random_search_core(
        grammar, config,
        make_validation_evaluator(validation_set, config.trials_per_problem, backend, judge,
                                  eval_options),
        observer);
}

}  // namespace gsearch
