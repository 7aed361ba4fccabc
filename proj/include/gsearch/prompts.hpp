// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsearch/component.hpp"
#include "gsearch/message.hpp"

namespace gsearch {

/// Instruction templates for every component, keyed by slot. The embedded
/// defaults are the canonical strings; they double as test fixtures, so
/// change them only together with the fixtures. A catalog file can override
/// any subset for experimentation without recompiling.
class PromptCatalog {
   public:
    PromptCatalog() : slots_(defaults()) {}

    const std::string& get(const std::string& slot) const {
        auto it = slots_.find(slot);
        if (it == slots_.end()) throw ConfigError("unknown prompt slot: " + slot);
        return it->second;
    }

    void set(const std::string& slot, std::string text) {
        if (!slots_.count(slot)) throw ConfigError("unknown prompt slot: " + slot);
        slots_[slot] = std::move(text);
    }

    std::vector<std::string> slot_names() const {
        std::vector<std::string> names;
        for (const auto& [k, _] : slots_) names.push_back(k);
        return names;
    }

    /// Overrides slots from a JSON object file: {"slot": "text", ...}.
    /// Unknown slot names are rejected so typos cannot silently no-op.
    static PromptCatalog from_file(const std::string& path);

   private:
    static const std::map<std::string, std::string>& defaults() {
        static const std::map<std::string, std::string> d = {
            {"reasoner.base",
             "Please think step by step and then solve the task. Put your final answer in "
             "\\boxed{}."},
            {"reasoner.followup.step_by_step",
             "Based on the previous solution above, please think step by step and provide your "
             "own solution. Put your final answer in \\boxed{}."},
            {"reasoner.followup.role_based",
             "Based on the previous solution above, please think step by step from your role "
             "perspective and provide your own solution. Put your final answer in \\boxed{}."},
            {"critic",
             "Please review the answer above and provide detailed feedback on any errors or "
             "improvements needed. At the end of your feedback, write either [CORRECT] or "
             "[INCORRECT]."},
            {"reflect",
             "Given previous attempts and feedback, carefully consider where you could go wrong. "
             "Using insights from previous attempts, try to solve the task better. Put your "
             "final answer in \\boxed{}."},
            {"debate",
             "Given solutions to the problem from all agents (including yourself), consider all "
             "perspectives and provide an updated solution and answer. Put your final answer in "
             "\\boxed{}."},
            {"consensus",
             "Given all the above solutions, analyze them carefully and provide a final solution "
             "and answer. Put your final answer in \\boxed{}."},
            {"voter.header", "Given these {n} solutions to the same problem:\n\n"},
            {"voter.solution", "\nSolution {i}:\n{content}\n"},
            {"voter.footer",
             "\nAnalyze these solutions and identify which answer appears most frequently.\n"
             "Copy that ENTIRE solution verbatim, including all reasoning steps.\n"
             "After copying the solution, ensure your final answer is in \\boxed{}."},
        };
        return d;
    }

    std::map<std::string, std::string> slots_;
};

inline PromptCatalog PromptCatalog::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prompt catalog: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("prompt catalog is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("prompt catalog must be a JSON object");
    PromptCatalog catalog;
    for (const auto& [slot, value] : doc.items()) {
        if (!value.is_string())
            throw ParseError("prompt slot " + slot + " must map to a string");
        catalog.set(slot, value.get<std::string>());
    }
    return catalog;
}

/// The five debate personas, assigned cyclically to role-based reasoners.
inline const std::array<std::string, 5>& role_personas() {
    static const std::array<std::string, 5> roles = {
        "Math Professor", "Grade School Teacher", "Math Enthusiast", "Research Scientist",
        "Teaching Assistant"};
    return roles;
}

namespace detail {

inline void replace_first(std::string& s, std::string_view key, std::string_view value) {
    std::size_t at = s.find(key);
    if (at != std::string::npos) s.replace(at, key.size(), value);
}

}  // namespace detail

/// Renders an input list the way agents see it: one titled block per
/// message, then the instruction.
inline std::string format_inputs(const std::vector<Message>& inputs,
                                 const std::string& instruction) {
    std::string prompt;
    for (const auto& m : inputs) {
        prompt += "### ";
        prompt += m.name;
        prompt += " by ";
        prompt += m.author;
        prompt += ":\n";
        prompt += m.content;
        prompt += "\n\n";
    }
    prompt += instruction;
    return prompt;
}

/// The voting instruction enumerating every solution inline.
inline std::string voting_instruction(const PromptCatalog& catalog,
                                      const std::vector<Message>& solutions) {
    std::string header = catalog.get("voter.header");
    detail::replace_first(header, "{n}", std::to_string(solutions.size()));
    std::string text = header;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        std::string entry = catalog.get("voter.solution");
        detail::replace_first(entry, "{i}", std::to_string(i + 1));
        detail::replace_first(entry, "{content}", solutions[i].content);
        text += entry;
    }
    text += catalog.get("voter.footer");
    return text;
}

}  // namespace gsearch
