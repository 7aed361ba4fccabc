// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <compare>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsearch/arity.hpp"
#include "gsearch/errors.hpp"

namespace gsearch {

/// The seven executable component kinds.
enum class ComponentKind {
    StepByStepReasoner,
    RoleBasedReasoner,
    SelfCriticIteration,
    DebateIteration,
    MultiSelfCriticIteration,
    MajorityVoter,
    ConsensusBuilder,
};

inline bool is_reasoner(ComponentKind k) {
    return k == ComponentKind::StepByStepReasoner || k == ComponentKind::RoleBasedReasoner;
}

inline bool is_iterative(ComponentKind k) {
    return k == ComponentKind::SelfCriticIteration || k == ComponentKind::DebateIteration ||
           k == ComponentKind::MultiSelfCriticIteration;
}

inline bool is_aggregator(ComponentKind k) {
    return k == ComponentKind::MajorityVoter || k == ComponentKind::ConsensusBuilder;
}

inline std::string to_string(ComponentKind k) {
    switch (k) {
        case ComponentKind::StepByStepReasoner: return "StepByStepReasoner";
        case ComponentKind::RoleBasedReasoner: return "RoleBasedReasoner";
        case ComponentKind::SelfCriticIteration: return "SelfCriticIteration";
        case ComponentKind::DebateIteration: return "DebateIteration";
        case ComponentKind::MultiSelfCriticIteration: return "MultiSelfCriticIteration";
        case ComponentKind::MajorityVoter: return "MajorityVoter";
        case ComponentKind::ConsensusBuilder: return "ConsensusBuilder";
    }
    return "?";
}

/// One grammar terminal: a component kind plus its fixed parameters.
///
/// `count` is meaningful only for reasoners (parallel answers) and `rounds`
/// only for iterative kinds; the unused parameter is held at 0. Identity is
/// the full (kind, count, rounds) triple, so StepByStepReasoner[cnt=1] and
/// StepByStepReasoner[cnt=5] are distinct terminals.
struct ComponentTerm {
    ComponentKind kind = ComponentKind::StepByStepReasoner;
    int count = 0;
    int rounds = 0;

    auto operator<=>(const ComponentTerm&) const = default;

    AritySignature signature() const {
        switch (kind) {
            case ComponentKind::StepByStepReasoner:
            case ComponentKind::RoleBasedReasoner:
                return {Arity::One, count > 1 ? Arity::Many : Arity::One};
            case ComponentKind::SelfCriticIteration:
                return {Arity::One, Arity::One};
            case ComponentKind::DebateIteration:
            case ComponentKind::MultiSelfCriticIteration:
                return {Arity::Many, Arity::Many};
            case ComponentKind::MajorityVoter:
            case ComponentKind::ConsensusBuilder:
                return {Arity::Many, Arity::One};
        }
        return {Arity::One, Arity::One};
    }

    /// Canonical token, e.g. "StepByStepReasoner[cnt=5]" or "MajorityVoter".
    std::string token() const {
        std::string t = gsearch::to_string(kind);
        char buf[32];
        if (is_reasoner(kind)) {
            std::snprintf(buf, sizeof(buf), "[cnt=%d]", count);
            t += buf;
        } else if (is_iterative(kind)) {
            std::snprintf(buf, sizeof(buf), "[rnds=%d]", rounds);
            t += buf;
        }
        return t;
    }

    /// Checks the parameter-presence rules; throws ConfigError on violation.
    void validate() const {
        if (is_reasoner(kind)) {
            if (count < 1) throw ConfigError(token() + ": reasoner needs count >= 1");
            if (rounds != 0) throw ConfigError(token() + ": reasoner takes no rounds");
        } else if (is_iterative(kind)) {
            if (rounds < 1) throw ConfigError(token() + ": iterative component needs rounds >= 1");
            if (count != 0) throw ConfigError(token() + ": iterative component takes no count");
        } else {
            if (count != 0 || rounds != 0)
                throw ConfigError(token() + ": aggregator takes no parameters");
        }
    }
};

inline ComponentTerm step_by_step(int count) { return {ComponentKind::StepByStepReasoner, count, 0}; }
inline ComponentTerm role_based(int count) { return {ComponentKind::RoleBasedReasoner, count, 0}; }
inline ComponentTerm self_critic(int rounds) { return {ComponentKind::SelfCriticIteration, 0, rounds}; }
inline ComponentTerm debate(int rounds) { return {ComponentKind::DebateIteration, 0, rounds}; }
inline ComponentTerm multi_self_critic(int rounds) { return {ComponentKind::MultiSelfCriticIteration, 0, rounds}; }
inline ComponentTerm majority_voter() { return {ComponentKind::MajorityVoter, 0, 0}; }
inline ComponentTerm consensus_builder() { return {ComponentKind::ConsensusBuilder, 0, 0}; }

/// Ordered terminal list, the genotype of a MAS. Structural legality
/// (start arity, chaining, single final answer) is judged by recognize(),
/// not enforced at construction, so rejectable sequences stay representable.
struct ComponentSequence {
    std::vector<ComponentTerm> terms;

    ComponentSequence() = default;
    ComponentSequence(std::initializer_list<ComponentTerm> ts) : terms(ts) {}
    explicit ComponentSequence(std::vector<ComponentTerm> ts) : terms(std::move(ts)) {}

    auto operator<=>(const ComponentSequence&) const = default;

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    const ComponentTerm& operator[](std::size_t i) const { return terms[i]; }

    bool contains(const ComponentTerm& t) const {
        for (const auto& x : terms)
            if (x == t) return true;
        return false;
    }

    /// "A[cnt=1] => B[rnds=2] => C" token notation.
    std::string text() const {
        std::string s;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i) s += " => ";
            s += terms[i].token();
        }
        return s;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::optional<ComponentKind> kind_from_name(std::string_view name) {
    if (name == "StepByStepReasoner" || name == "StepByStep") return ComponentKind::StepByStepReasoner;
    if (name == "RoleBasedReasoner" || name == "RoleBased") return ComponentKind::RoleBasedReasoner;
    if (name == "SelfCriticIteration" || name == "SelfCritic") return ComponentKind::SelfCriticIteration;
    if (name == "DebateIteration" || name == "Debate") return ComponentKind::DebateIteration;
    if (name == "MultiSelfCriticIteration" || name == "MultiSelfCritic")
        return ComponentKind::MultiSelfCriticIteration;
    if (name == "MajorityVoter") return ComponentKind::MajorityVoter;
    if (name == "ConsensusBuilder" || name == "Consensus") return ComponentKind::ConsensusBuilder;
    return std::nullopt;
}

}  // namespace detail

/// Parses one component token. Accepts the full names and the usual short
/// forms, with "[cnt=x]" / "[rnds=x]" / bare "[x]" parameters. A bare
/// parameterized name takes its default (reasoners 1, SelfCritic and
/// MultiSelfCritic 5, Debate 2). `position` is used in error messages only.
inline ComponentTerm parse_component_token(std::string_view raw, long position = -1) {
    std::string_view s = detail::trim(raw);
    if (s.empty()) throw ParseError("empty component token", position);

    std::string_view name = s;
    std::optional<std::string_view> param_key;
    std::optional<int> param_val;
    if (auto open = s.find('['); open != std::string_view::npos) {
        if (s.back() != ']')
            throw ParseError("unterminated '[' in component token: " + std::string(s), position);
        name = detail::trim(s.substr(0, open));
        std::string_view inner = detail::trim(s.substr(open + 1, s.size() - open - 2));
        if (auto eq = inner.find('='); eq != std::string_view::npos) {
            param_key = detail::trim(inner.substr(0, eq));
            inner = detail::trim(inner.substr(eq + 1));
        }
        int v = 0;
        if (inner.empty()) throw ParseError("missing parameter value in: " + std::string(s), position);
        for (char c : inner) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("parameter value must be a positive integer in: " + std::string(s),
                                 position);
            v = v * 10 + (c - '0');
            if (v > 1'000'000) throw ParseError("parameter value out of range in: " + std::string(s), position);
        }
        param_val = v;
    }

    auto kind = detail::kind_from_name(name);
    if (!kind) throw ParseError("unknown component name: " + std::string(name), position);

    ComponentTerm term{*kind, 0, 0};
    if (is_reasoner(*kind)) {
        if (param_key && *param_key != "cnt" && *param_key != "count")
            throw ParseError("reasoner takes 'cnt', got '" + std::string(*param_key) + "'", position);
        term.count = param_val.value_or(1);
    } else if (is_iterative(*kind)) {
        if (param_key && *param_key != "rnds" && *param_key != "rounds")
            throw ParseError("iterative component takes 'rnds', got '" + std::string(*param_key) + "'",
                             position);
        term.rounds = param_val.value_or(*kind == ComponentKind::DebateIteration ? 2 : 5);
    } else {
        if (param_val) throw ParseError(std::string(name) + " takes no parameter", position);
    }
    term.validate();
    return term;
}

/// Parses "A => B => C" token notation into a sequence (no legality check).
inline ComponentSequence parse_sequence_text(std::string_view text) {
    ComponentSequence seq;
    std::size_t pos = 0;
    long token_index = 0;
    while (true) {
        std::size_t sep = text.find("=>", pos);
        std::string_view tok =
            sep == std::string_view::npos ? text.substr(pos) : text.substr(pos, sep - pos);
        seq.terms.push_back(parse_component_token(tok, token_index++));
        if (sep == std::string_view::npos) break;
        pos = sep + 2;
    }
    return seq;
}

}  // namespace gsearch
