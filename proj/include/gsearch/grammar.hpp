// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gsearch/component.hpp"
#include "gsearch/errors.hpp"

namespace gsearch {

/// The grammar's nonterminal alphabet. System/StartSI/SI/MI form the
/// right-linear chaining skeleton; the other five are the arity classes
/// that expand to terminals.
enum class Nonterminal { System, StartSI, SI, MI, StartSISO, SISO, SIMO, MISO, MIMO };

inline constexpr Nonterminal kAllNonterminals[] = {
    Nonterminal::System, Nonterminal::StartSI, Nonterminal::SI,
    Nonterminal::MI,     Nonterminal::StartSISO, Nonterminal::SISO,
    Nonterminal::SIMO,   Nonterminal::MISO,      Nonterminal::MIMO,
};

inline std::string to_string(Nonterminal nt) {
    switch (nt) {
        case Nonterminal::System: return "System";
        case Nonterminal::StartSI: return "StartSI";
        case Nonterminal::SI: return "SI";
        case Nonterminal::MI: return "MI";
        case Nonterminal::StartSISO: return "StartSISO";
        case Nonterminal::SISO: return "SISO";
        case Nonterminal::SIMO: return "SIMO";
        case Nonterminal::MISO: return "MISO";
        case Nonterminal::MIMO: return "MIMO";
    }
    return "?";
}

inline std::optional<Nonterminal> nonterminal_from_name(std::string_view name) {
    for (Nonterminal nt : kAllNonterminals)
        if (to_string(nt) == name) return nt;
    return std::nullopt;
}

/// True for the nonterminals whose productions expand to a single terminal.
inline bool is_class_nonterminal(Nonterminal nt) {
    return nt == Nonterminal::StartSISO || nt == Nonterminal::SISO || nt == Nonterminal::SIMO ||
           nt == Nonterminal::MISO || nt == Nonterminal::MIMO;
}

/// Arity signature of an arity-class nonterminal.
inline AritySignature class_signature(Nonterminal nt) {
    switch (nt) {
        case Nonterminal::StartSISO:
        case Nonterminal::SISO: return {Arity::One, Arity::One};
        case Nonterminal::SIMO: return {Arity::One, Arity::Many};
        case Nonterminal::MISO: return {Arity::Many, Arity::One};
        case Nonterminal::MIMO: return {Arity::Many, Arity::Many};
        default: throw ConfigError(to_string(nt) + " is not an arity class");
    }
}

/// Input arity required by a chaining nonterminal (StartSI/SI take One, MI Many).
inline Arity chain_input_arity(Nonterminal nt) {
    return nt == Nonterminal::MI ? Arity::Many : Arity::One;
}

/// A grammar symbol: either a nonterminal or a terminal component.
struct Symbol {
    enum class Tag { Nonterm, Term } tag = Tag::Nonterm;
    Nonterminal nt = Nonterminal::System;
    ComponentTerm term;

    static Symbol N(Nonterminal n) { return {Tag::Nonterm, n, {}}; }
    static Symbol T(ComponentTerm t) { return {Tag::Term, Nonterminal::System, t}; }

    bool is_nonterminal() const { return tag == Tag::Nonterm; }
    bool operator==(const Symbol& o) const {
        if (tag != o.tag) return false;
        return is_nonterminal() ? nt == o.nt : term == o.term;
    }
    std::string text() const { return is_nonterminal() ? to_string(nt) : term.token(); }
};

struct Production {
    Nonterminal head;
    std::vector<Symbol> body;

    bool operator==(const Production& o) const { return head == o.head && body == o.body; }

    std::string text() const {
        std::string s = to_string(head) + " ->";
        for (const auto& sym : body) s += " " + sym.text();
        return s;
    }
};

/// A context-free grammar over MAS components.
///
/// The structural productions (System/StartSI/SI/MI) are shared by every
/// grammar; what varies is which terminals sit under each arity class.
/// Terminals under StartSISO may open a sequence; terminals under SISO may
/// only continue one. The declared `terminals` order is preserved; forced
/// sampling iterates components in exactly this order.
struct GrammarSpec {
    Nonterminal start = Nonterminal::System;
    std::vector<Production> productions;
    std::vector<ComponentTerm> terminals;

    const std::vector<Production>& all() const { return productions; }

    std::vector<std::size_t> productions_of(Nonterminal head) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < productions.size(); ++i)
            if (productions[i].head == head) out.push_back(i);
        return out;
    }

    /// Terminals produced by one arity-class nonterminal, in production order.
    std::vector<ComponentTerm> terminals_under(Nonterminal cls) const {
        std::vector<ComponentTerm> out;
        for (const auto& p : productions)
            if (p.head == cls && p.body.size() == 1 && !p.body[0].is_nonterminal())
                out.push_back(p.body[0].term);
        return out;
    }

    bool produces(Nonterminal cls, const ComponentTerm& t) const {
        for (const auto& p : productions)
            if (p.head == cls && p.body.size() == 1 && !p.body[0].is_nonterminal() &&
                p.body[0].term == t)
                return true;
        return false;
    }

    /// Index of an exact production, or npos.
    std::size_t find_production(Nonterminal head, const std::vector<Symbol>& body) const {
        for (std::size_t i = 0; i < productions.size(); ++i)
            if (productions[i].head == head && productions[i].body == body) return i;
        return static_cast<std::size_t>(-1);
    }
};

namespace detail {

inline void add_structural_productions(GrammarSpec& g) {
    using N = Nonterminal;
    auto P = [&](N head, std::vector<Symbol> body) { g.productions.push_back({head, std::move(body)}); };
    P(N::System, {Symbol::N(N::StartSI)});
    P(N::StartSI, {Symbol::N(N::StartSISO)});
    P(N::StartSI, {Symbol::N(N::StartSISO), Symbol::N(N::SI)});
    P(N::StartSI, {Symbol::N(N::SIMO), Symbol::N(N::MI)});
    P(N::SI, {Symbol::N(N::SISO)});
    P(N::SI, {Symbol::N(N::SISO), Symbol::N(N::SI)});
    P(N::SI, {Symbol::N(N::SIMO), Symbol::N(N::MI)});
    P(N::MI, {Symbol::N(N::MISO)});
    P(N::MI, {Symbol::N(N::MISO), Symbol::N(N::SI)});
    P(N::MI, {Symbol::N(N::MIMO), Symbol::N(N::MI)});
}

}  // namespace detail

inline void validate(const GrammarSpec& g);

/// Builds a grammar from per-class terminal lists. `startable` feeds
/// StartSISO; it must be a subset of (One,One) terminals. The declared
/// component order fixes forced sampling's iteration order.
inline GrammarSpec make_grammar(const std::vector<ComponentTerm>& terminals,
                                const std::vector<ComponentTerm>& startable) {
    GrammarSpec g;
    detail::add_structural_productions(g);
    using N = Nonterminal;
    for (const auto& t : startable) {
        t.validate();
        if (t.signature() != AritySignature{Arity::One, Arity::One})
            throw ConfigError(t.token() + " cannot open a sequence (needs One -> One)");
        if (std::find(terminals.begin(), terminals.end(), t) == terminals.end())
            throw ConfigError(t.token() + " is startable but not declared as a terminal");
        g.productions.push_back({N::StartSISO, {Symbol::T(t)}});
    }
    for (const auto& t : terminals) {
        t.validate();
        AritySignature sig = t.signature();
        N cls = sig.input == Arity::One
                    ? (sig.output == Arity::One ? N::SISO : N::SIMO)
                    : (sig.output == Arity::One ? N::MISO : N::MIMO);
        g.productions.push_back({cls, {Symbol::T(t)}});
    }
    g.terminals = terminals;

    // A terminal list that leaves some arity class empty also leaves parts
    // of the chaining skeleton unproductive. Drop those rules so sampling
    // never dead-ends on them.
    std::set<N> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            if (productive.count(p.head)) continue;
            bool ok = true;
            for (const auto& s : p.body)
                if (s.is_nonterminal() && !productive.count(s.nt)) ok = false;
            if (ok) {
                productive.insert(p.head);
                changed = true;
            }
        }
    }
    std::erase_if(g.productions, [&](const Production& p) {
        for (const auto& s : p.body)
            if (s.is_nonterminal() && !productive.count(s.nt)) return true;
        return false;
    });

    validate(g);
    return g;
}

/// The full nine-terminal production-rule grammar.
inline GrammarSpec default_grammar() {
    std::vector<ComponentTerm> terminals = {
        step_by_step(1), role_based(1),    self_critic(5),
        step_by_step(5), role_based(5),    majority_voter(),
        consensus_builder(), debate(2),    multi_self_critic(5),
    };
    std::vector<ComponentTerm> startable = {step_by_step(1), role_based(1)};
    return make_grammar(terminals, startable);
}

/// Structural validation: production shapes, arity chaining, class/signature
/// agreement, no dead terminals, and productivity of every reachable
/// nonterminal (so sampling cannot dead-end). Throws ConfigError.
inline void validate(const GrammarSpec& g) {
    if (g.start != Nonterminal::System) throw ConfigError("grammar start symbol must be System");

    std::set<ComponentTerm> produced;
    for (const auto& p : g.productions) {
        const auto& b = p.body;
        if (is_class_nonterminal(p.head)) {
            if (b.size() != 1 || b[0].is_nonterminal())
                throw ConfigError("arity class " + to_string(p.head) +
                                  " must expand to a single terminal: " + p.text());
            const ComponentTerm& t = b[0].term;
            t.validate();
            AritySignature want = class_signature(p.head);
            AritySignature got = t.signature();
            if (p.head == Nonterminal::StartSISO) want = {Arity::One, Arity::One};
            if (got != want)
                throw ConfigError(t.token() + " has class " + class_name(got) +
                                  ", cannot sit under " + to_string(p.head));
            produced.insert(t);
        } else {
            // Chaining skeleton: [NT] or [class-NT chain-NT] with matching arity.
            if (b.empty() || b.size() > 2)
                throw ConfigError("bad production shape: " + p.text());
            for (const auto& s : b)
                if (!s.is_nonterminal())
                    throw ConfigError("terminal in structural production: " + p.text());
            if (b.size() == 2) {
                if (!is_class_nonterminal(b[0].nt) || is_class_nonterminal(b[1].nt))
                    throw ConfigError("bad production shape: " + p.text());
                Arity out = class_signature(b[0].nt).output;
                if (out != chain_input_arity(b[1].nt))
                    throw ConfigError("arity chaining break in: " + p.text());
            }
            if (b.size() == 1 && p.head != Nonterminal::System &&
                is_class_nonterminal(b[0].nt) == false && p.head == b[0].nt)
                throw ConfigError("self-loop production: " + p.text());
        }
    }

    std::set<ComponentTerm> declared(g.terminals.begin(), g.terminals.end());
    if (declared.size() != g.terminals.size())
        throw ConfigError("duplicate terminal in declaration list");
    for (const auto& t : produced)
        if (!declared.count(t) && !g.produces(Nonterminal::StartSISO, t))
            throw ConfigError("terminal " + t.token() + " produced but not declared");
    // Declared terminals must all be reachable from System; with the fixed
    // skeleton that means appearing under some class nonterminal.
    for (const auto& t : g.terminals)
        if (!produced.count(t))
            throw ConfigError("dead terminal (not produced by any class): " + t.token());

    // Productivity fixpoint: every nonterminal reachable from System must be
    // able to derive a terminal-only string.
    std::set<Nonterminal> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            if (productive.count(p.head)) continue;
            bool ok = true;
            for (const auto& s : p.body)
                if (s.is_nonterminal() && !productive.count(s.nt)) ok = false;
            if (ok) {
                productive.insert(p.head);
                changed = true;
            }
        }
    }
    std::set<Nonterminal> reachable{g.start};
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            if (!reachable.count(p.head)) continue;
            for (const auto& s : p.body)
                if (s.is_nonterminal() && reachable.insert(s.nt).second) changed = true;
        }
    }
    for (Nonterminal nt : reachable)
        if (!productive.count(nt))
            throw ConfigError("nonterminal " + to_string(nt) +
                              " is reachable but cannot derive any terminal string");
}

/// Renders the grammar as its text document form.
inline std::string serialize(const GrammarSpec& g) {
    std::ostringstream out;
    out << "# MAS component grammar\n";
    out << "start: " << to_string(g.start) << "\n";
    out << "nonterminals:";
    for (Nonterminal nt : kAllNonterminals) out << ' ' << to_string(nt);
    out << "\n";
    out << "terminals:";
    for (const auto& t : g.terminals) out << ' ' << t.token();
    out << "\n\n";
    for (const auto& p : g.productions) out << p.text() << "\n";
    return out.str();
}

/// Parses the text document form back into a grammar and validates it.
/// Unknown names, malformed lines, or structural violations raise
/// ParseError / ConfigError with the offending line number.
inline GrammarSpec parse_grammar(std::string_view doc) {
    GrammarSpec g;
    std::vector<ComponentTerm> declared_order;
    bool saw_terminals_line = false;

    std::size_t line_no = 0, pos = 0;
    while (pos <= doc.size()) {
        std::size_t nl = doc.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? doc.substr(pos) : doc.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? doc.size() + 1 : nl + 1;
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;

        auto split_words = [](std::string_view s) {
            std::vector<std::string_view> words;
            std::size_t i = 0;
            while (i < s.size()) {
                while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
                std::size_t j = i;
                while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
                if (j > i) words.push_back(s.substr(i, j - i));
                i = j;
            }
            return words;
        };

        if (line.rfind("start:", 0) == 0) {
            auto name = detail::trim(line.substr(6));
            auto nt = nonterminal_from_name(name);
            if (!nt) throw ParseError("unknown start symbol: " + std::string(name), long(line_no));
            g.start = *nt;
            continue;
        }
        if (line.rfind("nonterminals:", 0) == 0) continue;  // informational
        if (line.rfind("terminals:", 0) == 0) {
            saw_terminals_line = true;
            for (auto w : split_words(line.substr(10)))
                declared_order.push_back(parse_component_token(w, long(line_no)));
            continue;
        }

        std::size_t arrow = line.find("->");
        if (arrow == std::string_view::npos)
            throw ParseError("expected 'Head -> body' production: " + std::string(line),
                             long(line_no));
        auto head_name = detail::trim(line.substr(0, arrow));
        auto head = nonterminal_from_name(head_name);
        if (!head) throw ParseError("unknown nonterminal: " + std::string(head_name), long(line_no));

        Production p{*head, {}};
        for (auto w : split_words(line.substr(arrow + 2))) {
            if (auto nt = nonterminal_from_name(w))
                p.body.push_back(Symbol::N(*nt));
            else
                p.body.push_back(Symbol::T(parse_component_token(w, long(line_no))));
        }
        if (p.body.empty()) throw ParseError("empty production body", long(line_no));
        g.productions.push_back(std::move(p));
    }

    if (saw_terminals_line) {
        g.terminals = declared_order;
    } else {
        // Derive declaration order from first production appearance,
        // skipping start-only duplicates.
        std::set<ComponentTerm> seen;
        for (const auto& p : g.productions)
            if (is_class_nonterminal(p.head) && p.head != Nonterminal::StartSISO &&
                p.body.size() == 1 && !p.body[0].is_nonterminal() &&
                seen.insert(p.body[0].term).second)
                g.terminals.push_back(p.body[0].term);
    }
    validate(g);
    return g;
}

/// Named entry of the base-MAS table.
struct NamedSequence {
    std::string name;
    ComponentSequence sequence;
};

/// The four base MASes, in presentation order (CoT first).
inline std::vector<NamedSequence> base_mases() {
    return {
        {"CoT", ComponentSequence{step_by_step(1)}},
        {"CoT-SC", ComponentSequence{step_by_step(5), majority_voter()}},
        {"Self-Refine", ComponentSequence{step_by_step(1), self_critic(5)}},
        {"MA-Debate", ComponentSequence{role_based(5), debate(2), consensus_builder()}},
    };
}

inline const ComponentSequence& base_mas(std::string_view name) {
    static const std::vector<NamedSequence> all = base_mases();
    for (const auto& e : all)
        if (e.name == name) return e.sequence;
    throw ConfigError("unknown base MAS: " + std::string(name));
}

}  // namespace gsearch
