// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gsearch/grammar.hpp"

namespace gsearch {

/// A witness that a sequence belongs to the grammar: the leftmost chain of
/// production applications from the start symbol, stored as indices into
/// GrammarSpec::productions.
struct Derivation {
    std::vector<std::size_t> steps;

    bool operator==(const Derivation&) const = default;
};

/// Replays a derivation from the start symbol and returns the terminal
/// string it produces. Throws ConfigError if an application does not match
/// the leftmost nonterminal (the derivation is not a valid witness).
inline ComponentSequence replay(const GrammarSpec& grammar, const Derivation& d) {
    std::vector<Symbol> pending{Symbol::N(grammar.start)};
    ComponentSequence seq;
    for (std::size_t idx : d.steps) {
        if (idx >= grammar.productions.size())
            throw ConfigError("derivation step out of range: " + std::to_string(idx));
        const Production& p = grammar.productions[idx];
        // Find the leftmost nonterminal.
        std::size_t at = 0;
        while (at < pending.size() && !pending[at].is_nonterminal()) ++at;
        if (at == pending.size())
            throw ConfigError("derivation applies " + p.text() + " but no nonterminal remains");
        if (pending[at].nt != p.head)
            throw ConfigError("derivation applies " + p.text() + " but leftmost nonterminal is " +
                              to_string(pending[at].nt));
        pending.erase(pending.begin() + long(at));
        pending.insert(pending.begin() + long(at), p.body.begin(), p.body.end());
    }
    for (const auto& s : pending) {
        if (s.is_nonterminal())
            throw ConfigError("derivation is incomplete: " + to_string(s.nt) + " unexpanded");
        seq.terms.push_back(s.term);
    }
    return seq;
}

/// One "Head -> body" line per application, in order.
inline std::string render(const GrammarSpec& grammar, const Derivation& d) {
    std::string out;
    for (std::size_t idx : d.steps) {
        if (idx >= grammar.productions.size())
            throw ConfigError("derivation step out of range: " + std::to_string(idx));
        out += grammar.productions[idx].text();
        out += '\n';
    }
    return out;
}

enum class RejectCode { BadStart, ChainingBreak, ManyFinalOutput, UnknownTerminal, Empty };

inline std::string to_string(RejectCode c) {
    switch (c) {
        case RejectCode::BadStart: return "bad_start";
        case RejectCode::ChainingBreak: return "chaining_break";
        case RejectCode::ManyFinalOutput: return "many_final_output";
        case RejectCode::UnknownTerminal: return "unknown_terminal";
        case RejectCode::Empty: return "empty_sequence";
    }
    return "?";
}

/// Why a sequence was rejected, anchored at the first violating position.
struct Rejection {
    std::size_t position = 0;
    RejectCode code = RejectCode::BadStart;
    std::string message;
};

struct RecognizeResult {
    std::optional<Derivation> derivation;  // present iff accepted
    std::optional<Rejection> rejection;    // present iff rejected

    bool accepted() const { return derivation.has_value(); }
};

/// Decides membership by walking the right-linear structure of the grammar:
/// after each component the machine is in state StartSI, SI, or MI according
/// to the arity produced so far. On accept, the returned derivation replays
/// to the input sequence; on reject, the rejection names the first violating
/// position and why.
inline RecognizeResult recognize(const GrammarSpec& grammar, const ComponentSequence& seq) {
    using N = Nonterminal;
    auto rejected = [](std::size_t pos, RejectCode code, std::string msg) {
        RecognizeResult r;
        r.rejection = Rejection{pos, code, std::move(msg)};
        return r;
    };

    if (seq.terms.empty()) return rejected(0, RejectCode::Empty, "sequence has no components");

    Derivation d;
    auto push = [&](N head, const std::vector<Symbol>& body) {
        std::size_t idx = grammar.find_production(head, body);
        if (idx == static_cast<std::size_t>(-1))
            throw ConfigError("grammar lacks production " + Production{head, body}.text());
        d.steps.push_back(idx);
    };

    push(N::System, {Symbol::N(N::StartSI)});

    N chain = N::StartSI;
    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        const ComponentTerm& t = seq.terms[i];
        try {
            t.validate();
        } catch (const Error& e) {
            return rejected(i, RejectCode::UnknownTerminal, e.what());
        }
        const AritySignature sig = t.signature();
        const bool last = i + 1 == seq.terms.size();

        if (sig.input != chain_input_arity(chain)) {
            if (chain == N::StartSI)
                return rejected(i, RejectCode::BadStart,
                                t.token() + " needs prior answers; a sequence cannot open with it");
            return rejected(i, RejectCode::ChainingBreak,
                            t.token() + " expects " + to_string(sig.input) + " input but position " +
                                std::to_string(i) + " receives " +
                                to_string(chain_input_arity(chain)));
        }

        // Pick the arity class this terminal must sit under at this position.
        N cls;
        if (sig.output == Arity::One)
            cls = chain == N::StartSI ? N::StartSISO : (chain == N::MI ? N::MISO : N::SISO);
        else
            cls = chain == N::MI ? N::MIMO : N::SIMO;

        if (!grammar.produces(cls, t)) {
            if (chain == N::StartSI && sig.output == Arity::One &&
                grammar.produces(N::SISO, t))
                return rejected(i, RejectCode::BadStart,
                                t.token() + " may continue a sequence but not open one");
            return rejected(i, RejectCode::UnknownTerminal,
                            "grammar has no " + to_string(cls) + " production for " + t.token());
        }

        if (sig.output == Arity::Many && last)
            return rejected(i, RejectCode::ManyFinalOutput,
                            t.token() +
                                " leaves multiple answers; a complete system must end with one");

        // Chain production first (leftmost), then the class expansion.
        N next = sig.output == Arity::One ? N::SI : N::MI;
        if (last)
            push(chain, {Symbol::N(cls)});
        else
            push(chain, {Symbol::N(cls), Symbol::N(next)});
        push(cls, {Symbol::T(t)});
        chain = next;
    }

    RecognizeResult r;
    r.derivation = std::move(d);
    return r;
}

/// Convenience: accept/reject without the witness.
inline bool accepts(const GrammarSpec& grammar, const ComponentSequence& seq) {
    return recognize(grammar, seq).accepted();
}

}  // namespace gsearch
