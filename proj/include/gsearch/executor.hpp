// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsearch/backend.hpp"
#include "gsearch/components.hpp"
#include "gsearch/grammar.hpp"
#include "gsearch/recognize.hpp"

namespace gsearch {

namespace detail {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[std::size_t(i)] = digits[v & 0xf];
    return out;
}

inline std::string digest_messages(const std::vector<Message>& messages) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& m : messages) {
        h = fnv1a(m.name, h);
        h = fnv1a("\x1f", h);
        h = fnv1a(m.author, h);
        h = fnv1a("\x1f", h);
        h = fnv1a(m.content, h);
        h = fnv1a("\x1e", h);
    }
    return hex64(h);
}

inline std::string digest_message(const Message& m) { return digest_messages({m}); }

}  // namespace detail

/// Per-run backend wrapper: prefixes request tags with the component
/// position, enforces the run's wall-clock deadline, and keeps a run-local
/// ledger so cost attribution stays exact even when many runs share one
/// backend concurrently.
class RunScope final : public LLMBackend {
   public:
    RunScope(LLMBackend& inner, double timeout_seconds)
        : inner_(inner), local_(inner.ledger().prices()) {
        if (timeout_seconds > 0)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_seconds));
    }

    void set_prefix(std::string prefix) { prefix_ = std::move(prefix); }

    ChatResponse complete(const ChatRequest& request) override {
        if (deadline_ && std::chrono::steady_clock::now() >= *deadline_)
            throw TimeoutError("run deadline exceeded before " + prefix_ + request.request_tag);
        ChatRequest tagged = request;
        tagged.request_tag = prefix_ + request.request_tag;
        ChatResponse response = inner_.complete(tagged);
        local_.append({tagged.request_tag, response.model, response.prompt_tokens,
                       response.completion_tokens});
        return response;
    }

    CostLedger& ledger() override { return local_; }

   private:
    LLMBackend& inner_;
    CostLedger local_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::string prefix_;
};

/// What one component did during a run: content digests in place of full
/// texts (transcripts hold those) plus its own slice of the call/cost bill.
struct TraceStep {
    int index = 0;
    std::string component;  // token text, e.g. "StepByStepReasoner[cnt=5]"
    std::string inputs_digest;
    std::vector<std::string> output_digests;
    long calls = 0;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    double dollars = 0.0;
};

struct ExecutionResult {
    Message final;
    std::vector<TraceStep> trace;
    double cost = 0.0;
    long call_count = 0;
};

struct ExecuteOptions {
    const GrammarSpec* grammar = nullptr;    // null: the default grammar
    const PromptCatalog* catalog = nullptr;  // null: embedded defaults
    double timeout_seconds = 300.0;          // <= 0: no deadline
    bool verify_membership = true;
};

/// Runs a component sequence on one task. Component 0 sees only the task;
/// each later component consumes the full output list of its predecessor.
/// Reasoner profiles thread forward so debates reuse the agents that wrote
/// the answers being debated. Structural violations surface as
/// StructureError, backend failures as BackendError naming the component,
/// and deadline overruns as TimeoutError.
inline ExecutionResult execute(const ComponentSequence& seq, const TaskContext& task,
                               LLMBackend& backend, const ExecuteOptions& opts = {}) {
    static const GrammarSpec default_g = default_grammar();
    static const PromptCatalog default_catalog;
    const GrammarSpec& grammar = opts.grammar ? *opts.grammar : default_g;
    const PromptCatalog& catalog = opts.catalog ? *opts.catalog : default_catalog;

    if (opts.verify_membership) {
        RecognizeResult membership = recognize(grammar, seq);
        if (!membership.accepted())
            throw StructureError("sequence rejected at position " +
                                 std::to_string(membership.rejection->position) + ": " +
                                 membership.rejection->message);
    }

    RunScope scope(backend, opts.timeout_seconds);

    ExecutionResult result;
    std::vector<Message> current;
    std::vector<AgentProfile> last_profiles;
    bool last_was_reasoner = false;

    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        const ComponentTerm& t = seq.terms[i];
        scope.set_prefix("c" + std::to_string(i) + "." + to_string(t.kind) + "/");

        TraceStep step;
        step.index = int(i);
        step.component = t.token();
        step.inputs_digest = i == 0 ? detail::digest_message(task.task_text)
                                    : detail::digest_messages(current);
        const std::size_t entries_before = scope.ledger().size();
        const std::size_t inputs_count = current.size();

        std::size_t expected = 0;
        try {
            switch (t.kind) {
                case ComponentKind::StepByStepReasoner:
                case ComponentKind::RoleBasedReasoner: {
                    std::optional<Message> prior;
                    if (i > 0) {
                        if (current.size() != 1)
                            throw StructureError("component " + std::to_string(i) + " (" +
                                                 t.token() + ") needs one input, got " +
                                                 std::to_string(current.size()));
                        prior = current[0];
                    }
                    ReasonerKind rk = t.kind == ComponentKind::StepByStepReasoner
                                          ? ReasonerKind::StepByStep
                                          : ReasonerKind::RoleBased;
                    ReasonerResult rr = run_reasoner(rk, t.count, task, prior, scope, catalog);
                    current = std::move(rr.outputs);
                    last_profiles = std::move(rr.agents);
                    last_was_reasoner = true;
                    expected = std::size_t(t.count);
                    break;
                }
                case ComponentKind::SelfCriticIteration: {
                    std::vector<AgentProfile> authors;
                    if (last_was_reasoner && last_profiles.size() == current.size())
                        authors = last_profiles;
                    current = run_self_critic(false, t.rounds, task, current, scope, authors,
                                              catalog);
                    last_was_reasoner = false;
                    expected = 1;
                    break;
                }
                case ComponentKind::MultiSelfCriticIteration: {
                    std::vector<AgentProfile> authors;
                    if (last_was_reasoner && last_profiles.size() == current.size())
                        authors = last_profiles;
                    current = run_self_critic(true, t.rounds, task, current, scope, authors,
                                              catalog);
                    last_was_reasoner = false;
                    expected = inputs_count;
                    break;
                }
                case ComponentKind::DebateIteration: {
                    std::vector<AgentProfile> agents;
                    if (last_was_reasoner && last_profiles.size() == current.size())
                        agents = last_profiles;
                    else
                        agents.assign(current.size(), AgentProfile{"Debate Agent"});
                    current = run_debate(t.rounds, task, current, agents, scope, catalog);
                    last_was_reasoner = false;
                    expected = inputs_count;
                    break;
                }
                case ComponentKind::MajorityVoter:
                case ComponentKind::ConsensusBuilder: {
                    AggregatorKind ak = t.kind == ComponentKind::MajorityVoter
                                            ? AggregatorKind::MajorityVoter
                                            : AggregatorKind::ConsensusBuilder;
                    Message out = run_aggregator(ak, task, current, scope, catalog);
                    current.assign(1, std::move(out));
                    last_was_reasoner = false;
                    expected = 1;
                    break;
                }
            }
        } catch (const BackendError& e) {
            throw BackendError("component " + std::to_string(i) + " (" + t.token() +
                                   "): " + e.what(),
                               e.request_tag);
        }

        if (current.size() != expected)
            throw StructureError("component " + std::to_string(i) + " (" + t.token() +
                                 ") produced " + std::to_string(current.size()) +
                                 " outputs, expected " + std::to_string(expected));

        for (const auto& m : current) step.output_digests.push_back(detail::digest_message(m));
        auto entries = scope.ledger().snapshot();
        for (std::size_t k = entries_before; k < entries.size(); ++k) {
            ++step.calls;
            step.prompt_tokens += entries[k].prompt_tokens;
            step.completion_tokens += entries[k].completion_tokens;
            step.dollars += scope.ledger().entry_dollars(entries[k]);
        }
        result.trace.push_back(std::move(step));
    }

    if (current.size() != 1)
        throw StructureError("run ended with " + std::to_string(current.size()) +
                             " answers; a complete system must end with one");
    result.final = current[0];
    result.cost = scope.ledger().total();
    result.call_count = long(scope.ledger().size());
    return result;
}

}  // namespace gsearch
