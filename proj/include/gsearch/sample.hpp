// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <string>
#include <vector>

#include "gsearch/grammar.hpp"
#include "gsearch/rng.hpp"

namespace gsearch {

struct SampleOptions {
    /// Maximum production applications before an unfinished expansion is
    /// discarded and restarted. Completed expansions are never discarded,
    /// whatever their application count ended up as.
    int max_depth = 16;
    /// How many discarded attempts to tolerate before giving up.
    int resample_budget = 10000;
};

/// Draws one component sequence from the grammar by leftmost expansion with
/// uniform production choice. Expansions that still hold nonterminals after
/// max_depth applications are discarded and retried; exhausting the retry
/// budget raises SampleBudgetError.
inline ComponentSequence sample(const GrammarSpec& grammar, SeededRng& rng,
                                const SampleOptions& opts = {}) {
    if (opts.max_depth < 1) throw ConfigError("max_depth must be positive");
    if (opts.resample_budget < 1) throw ConfigError("resample_budget must be positive");

    for (int attempt = 0; attempt < opts.resample_budget; ++attempt) {
        ComponentSequence seq;
        std::deque<Symbol> pending{Symbol::N(grammar.start)};
        int applications = 0;
        bool discarded = false;

        while (!pending.empty()) {
            if (!pending.front().is_nonterminal()) {
                seq.terms.push_back(pending.front().term);
                pending.pop_front();
                continue;
            }
            // A partial expansion is abandoned once it has burned more than
            // max_depth applications and still owes a nonterminal. The final
            // application of a finished derivation may be the (max_depth+1)th;
            // completions are never thrown away.
            if (applications > opts.max_depth) {
                discarded = true;
                break;
            }
            Nonterminal head = pending.front().nt;
            pending.pop_front();

            auto choices = grammar.productions_of(head);
            if (choices.empty())
                throw ConfigError("no production for nonterminal " + to_string(head));
            const Production& p = grammar.productions[choices[rng.uniform_index(choices.size())]];
            ++applications;
            for (auto it = p.body.rbegin(); it != p.body.rend(); ++it) pending.push_front(*it);
        }

        if (!discarded) return seq;
    }
    throw SampleBudgetError("no sequence within depth " + std::to_string(opts.max_depth) +
                            " after " + std::to_string(opts.resample_budget) + " attempts");
}

}  // namespace gsearch
