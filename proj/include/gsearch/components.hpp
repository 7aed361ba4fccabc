// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsearch/backend.hpp"
#include "gsearch/component.hpp"
#include "gsearch/message.hpp"
#include "gsearch/prompts.hpp"

namespace gsearch {

namespace detail {

/// One agent turn: format the inputs, send, wrap the reply as a Message.
inline Message agent_call(LLMBackend& backend, const AgentProfile& agent,
                          const std::vector<Message>& inputs, const std::string& instruction,
                          const std::string& tag, int iteration_idx = -1) {
    ChatRequest request;
    request.system_text = agent.role;
    request.user_text = format_inputs(inputs, instruction);
    request.temperature = agent.temperature;
    request.request_tag = tag;
    ChatResponse response = backend.complete(request);
    return Message{"answer", agent.display_name, std::move(response.content), iteration_idx};
}

inline std::string stream_tag(const std::string& base, std::size_t index) {
    return base + "#" + std::to_string(index);
}

}  // namespace detail

struct ReasonerResult {
    std::vector<Message> outputs;
    std::vector<AgentProfile> agents;
};

enum class ReasonerKind { StepByStep, RoleBased };

/// Fans out `count` independent reasoning calls. A single reasoner runs at
/// temperature 0.5, parallel ones at 0.8. Role-based reasoners cycle the
/// five personas; step-by-step ones share one identity. When a prior answer
/// is given the follow-up instruction replaces the opening one. A call that
/// still fails after the backend's retries becomes an error-flagged Message
/// instead of sinking the whole fan-out.
inline ReasonerResult run_reasoner(ReasonerKind kind, int count, const TaskContext& task,
                                   const std::optional<Message>& prior, LLMBackend& backend,
                                   const PromptCatalog& catalog = {}) {
    if (count < 1) throw ConfigError("reasoner count must be positive");

    const bool parallel = count > 1;
    std::string instruction;
    if (!prior.has_value())
        instruction = catalog.get("reasoner.base");
    else if (kind == ReasonerKind::StepByStep)
        instruction = catalog.get("reasoner.followup.step_by_step");
    else
        instruction = catalog.get("reasoner.followup.role_based");

    std::vector<Message> inputs{task.task_text};
    if (prior.has_value()) inputs.push_back(*prior);

    ReasonerResult result;
    for (int i = 0; i < count; ++i) {
        AgentProfile agent;
        agent.temperature = parallel ? 0.8 : 0.5;
        if (kind == ReasonerKind::StepByStep) {
            agent.display_name = "Chain-of-Thought Agent";
        } else {
            agent.display_name = "Role-Based Agent";
            agent.role = role_personas()[std::size_t(i) % role_personas().size()];
        }
        result.agents.push_back(agent);

        std::string tag = parallel ? detail::stream_tag(agent.display_name, std::size_t(i))
                                   : agent.display_name;
        try {
            result.outputs.push_back(
                detail::agent_call(backend, agent, inputs, instruction, tag));
        } catch (const BackendError& e) {
            result.outputs.push_back(
                Message{"error", agent.display_name,
                        std::string("[BACKEND ERROR] ") + e.what(), -1});
        }
    }
    return result;
}

/// Critic-then-reflect refinement. Each input answer gets its own stream:
/// up to `rounds` critic verdicts, stopping as soon as one contains
/// "[CORRECT]"; every rejection appends answer+feedback to the reflect
/// agent's accumulated context and asks for a better attempt. The reflect
/// agent should be the one that produced the answer; pass its profile via
/// `authors` (per stream) or let a fresh refinement identity stand in.
inline std::vector<Message> run_self_critic(bool parallel, int rounds, const TaskContext& task,
                                            const std::vector<Message>& inputs,
                                            LLMBackend& backend,
                                            const std::vector<AgentProfile>& authors = {},
                                            const PromptCatalog& catalog = {}) {
    if (rounds < 1) throw ConfigError("rounds must be positive");
    if (!parallel && inputs.size() != 1)
        throw StructureError("single-stream refinement needs exactly 1 input, got " +
                             std::to_string(inputs.size()));
    if (parallel && inputs.size() < 2)
        throw StructureError("parallel refinement needs at least 2 inputs, got " +
                             std::to_string(inputs.size()));
    if (!authors.empty() && authors.size() != inputs.size())
        throw StructureError("author profiles must match input streams");

    const std::string critic_instruction = catalog.get("critic");
    const std::string reflect_instruction = catalog.get("reflect");

    std::vector<Message> finals;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        AgentProfile reflect_agent =
            authors.empty() ? AgentProfile{"Refinement Agent", "assistant", 0.5} : authors[s];
        AgentProfile critic_agent{"Critic Agent", "assistant", 0.5};

        std::string critic_tag = parallel ? detail::stream_tag("Critic Agent", s) : "Critic Agent";
        std::string reflect_tag =
            parallel ? detail::stream_tag(reflect_agent.display_name, s)
                     : reflect_agent.display_name;

        std::vector<Message> accumulated{task.task_text};
        Message answer = inputs[s];
        for (int i = 0; i < rounds; ++i) {
            Message feedback = detail::agent_call(backend, critic_agent,
                                                  {task.task_text, answer}, critic_instruction,
                                                  critic_tag, i);
            if (feedback.content.find("[CORRECT]") != std::string::npos) break;
            accumulated.push_back(answer);
            accumulated.push_back(feedback);
            answer = detail::agent_call(backend, reflect_agent, accumulated,
                                        reflect_instruction, reflect_tag, i + 1);
        }
        finals.push_back(std::move(answer));
    }
    return finals;
}

/// `rounds` rounds of all-to-all debate: every agent sees the task plus all
/// current answers and rewrites its own; each round's outputs replace the
/// answer list wholesale.
inline std::vector<Message> run_debate(int rounds, const TaskContext& task,
                                       const std::vector<Message>& inputs,
                                       const std::vector<AgentProfile>& agents,
                                       LLMBackend& backend, const PromptCatalog& catalog = {}) {
    if (rounds < 1) throw ConfigError("rounds must be positive");
    if (inputs.size() < 2)
        throw StructureError("debate needs at least 2 inputs, got " +
                             std::to_string(inputs.size()));
    if (agents.size() != inputs.size())
        throw StructureError("debate needs one agent per input stream");

    const std::string instruction = catalog.get("debate");
    std::vector<Message> current = inputs;
    for (int round = 0; round < rounds; ++round) {
        std::vector<Message> inputs_with_task{task.task_text};
        inputs_with_task.insert(inputs_with_task.end(), current.begin(), current.end());
        std::vector<Message> next;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            std::string tag = detail::stream_tag(agents[i].display_name, i) + "@r" +
                              std::to_string(round + 1);
            next.push_back(detail::agent_call(backend, agents[i], inputs_with_task, instruction,
                                              tag));
        }
        current = std::move(next);
    }
    return current;
}

enum class AggregatorKind { MajorityVoter, ConsensusBuilder };

/// Reduces many answers to one with a single low-temperature call. The
/// voter inlines every solution into its instruction and asks for the most
/// frequent answer copied verbatim; the consensus builder passes the
/// answers as context and asks for a synthesized final solution.
inline Message run_aggregator(AggregatorKind kind, const TaskContext& task,
                              const std::vector<Message>& inputs, LLMBackend& backend,
                              const PromptCatalog& catalog = {}) {
    if (inputs.empty()) throw StructureError("aggregator received no inputs");
    if (inputs.size() < 2)
        warn("aggregator received a single input; passing it through a degenerate prompt");

    if (kind == AggregatorKind::MajorityVoter) {
        AgentProfile agent{"Voting Agent", "assistant", 0.1};
        return detail::agent_call(backend, agent, {task.task_text},
                                  voting_instruction(catalog, inputs), agent.display_name);
    }
    AgentProfile agent{"Final Decision Agent", "assistant", 0.1};
    std::vector<Message> with_task{task.task_text};
    with_task.insert(with_task.end(), inputs.begin(), inputs.end());
    return detail::agent_call(backend, agent, with_task, catalog.get("consensus"),
                              agent.display_name);
}

}  // namespace gsearch
