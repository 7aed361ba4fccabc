// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "gsearch/grammar.hpp"

namespace gsearch {

namespace detail {

struct EnumerationWalker {
    const GrammarSpec& grammar;
    int max_len;
    std::vector<ComponentSequence> out;
    std::vector<ComponentTerm> prefix;

    void emit() { out.push_back(ComponentSequence{prefix}); }

    void walk(Nonterminal chain) {
        if (int(prefix.size()) >= max_len) return;
        using N = Nonterminal;
        const bool opening = chain == N::StartSI;
        N one_cls = opening ? N::StartSISO : (chain == N::MI ? N::MISO : N::SISO);
        N many_cls = chain == N::MI ? N::MIMO : N::SIMO;

        for (const auto& t : grammar.terminals_under(one_cls)) {
            prefix.push_back(t);
            emit();  // One output: the sequence may stop here.
            walk(N::SI);
            prefix.pop_back();
        }
        for (const auto& t : grammar.terminals_under(many_cls)) {
            prefix.push_back(t);
            walk(N::MI);  // Many output: something must consume it.
            prefix.pop_back();
        }
    }
};

}  // namespace detail

/// All complete sequences of at most max_len components, sorted
/// lexicographically by each component's index in the grammar's declared
/// terminal order (so snapshots are stable across runs).
inline std::vector<ComponentSequence> enumerate_sequences(const GrammarSpec& grammar,
                                                          int max_len) {
    if (max_len < 1) throw ConfigError("max_len must be positive");
    detail::EnumerationWalker w{grammar, max_len, {}, {}};
    w.walk(Nonterminal::StartSI);

    std::map<ComponentTerm, std::size_t> rank;
    for (std::size_t i = 0; i < grammar.terminals.size(); ++i)
        rank.emplace(grammar.terminals[i], i);
    auto key = [&](const ComponentSequence& s) {
        std::vector<std::size_t> k;
        k.reserve(s.terms.size());
        for (const auto& t : s.terms) k.push_back(rank.at(t));
        return k;
    };
    std::sort(w.out.begin(), w.out.end(),
              [&](const ComponentSequence& a, const ComponentSequence& b) {
                  return key(a) < key(b);
              });
    return w.out;
}

inline std::size_t enumerate_count(const GrammarSpec& grammar, int max_len) {
    return enumerate_sequences(grammar, max_len).size();
}

}  // namespace gsearch
