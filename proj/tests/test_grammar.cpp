// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gsearch/gsearch.hpp"

using namespace gsearch;

TEST_CASE("default grammar has the nine production-rule terminals in declared order") {
    GrammarSpec g = default_grammar();

    std::vector<std::string> got;
    for (const auto& t : g.terminals) got.push_back(t.token());

    std::vector<std::string> want = {
        "StepByStepReasoner[cnt=1]",
        "RoleBasedReasoner[cnt=1]",
        "SelfCriticIteration[rnds=5]",
        "StepByStepReasoner[cnt=5]",
        "RoleBasedReasoner[cnt=5]",
        "MajorityVoter",
        "ConsensusBuilder",
        "DebateIteration[rnds=2]",
        "MultiSelfCriticIteration[rnds=5]",
    };
    CHECK(got == want);
}

TEST_CASE("default grammar has exactly 21 productions") {
    GrammarSpec g = default_grammar();
    CHECK(g.productions.size() == 21);

    // Ten structural productions over the chaining skeleton.
    CHECK(g.productions_of(Nonterminal::System).size() == 1);
    CHECK(g.productions_of(Nonterminal::StartSI).size() == 3);
    CHECK(g.productions_of(Nonterminal::SI).size() == 3);
    CHECK(g.productions_of(Nonterminal::MI).size() == 3);

    // Class productions: one per terminal plus one per startable terminal.
    CHECK(g.productions_of(Nonterminal::StartSISO).size() == 2);
    CHECK(g.productions_of(Nonterminal::SISO).size() == 3);
    CHECK(g.productions_of(Nonterminal::SIMO).size() == 2);
    CHECK(g.productions_of(Nonterminal::MISO).size() == 2);
    CHECK(g.productions_of(Nonterminal::MIMO).size() == 2);
}

TEST_CASE("default grammar passes structural validation") {
    GrammarSpec g = default_grammar();
    CHECK_NOTHROW(validate(g));
}

TEST_CASE("class membership of the default terminals") {
    GrammarSpec g = default_grammar();

    auto tokens = [&](Nonterminal cls) {
        std::vector<std::string> out;
        for (const auto& t : g.terminals_under(cls)) out.push_back(t.token());
        return out;
    };

    CHECK(tokens(Nonterminal::StartSISO) ==
          std::vector<std::string>{"StepByStepReasoner[cnt=1]", "RoleBasedReasoner[cnt=1]"});
    CHECK(tokens(Nonterminal::SISO) ==
          std::vector<std::string>{"StepByStepReasoner[cnt=1]", "RoleBasedReasoner[cnt=1]",
                                   "SelfCriticIteration[rnds=5]"});
    CHECK(tokens(Nonterminal::SIMO) ==
          std::vector<std::string>{"StepByStepReasoner[cnt=5]", "RoleBasedReasoner[cnt=5]"});
    CHECK(tokens(Nonterminal::MISO) ==
          std::vector<std::string>{"MajorityVoter", "ConsensusBuilder"});
    CHECK(tokens(Nonterminal::MIMO) ==
          std::vector<std::string>{"DebateIteration[rnds=2]",
                                   "MultiSelfCriticIteration[rnds=5]"});
}

TEST_CASE("terminal arity signatures match their grammar class") {
    CHECK(step_by_step(1).signature() == AritySignature{Arity::One, Arity::One});
    CHECK(step_by_step(5).signature() == AritySignature{Arity::One, Arity::Many});
    CHECK(role_based(1).signature() == AritySignature{Arity::One, Arity::One});
    CHECK(role_based(5).signature() == AritySignature{Arity::One, Arity::Many});
    CHECK(self_critic(5).signature() == AritySignature{Arity::One, Arity::One});
    CHECK(majority_voter().signature() == AritySignature{Arity::Many, Arity::One});
    CHECK(consensus_builder().signature() == AritySignature{Arity::Many, Arity::One});
    CHECK(debate(2).signature() == AritySignature{Arity::Many, Arity::Many});
    CHECK(multi_self_critic(5).signature() == AritySignature{Arity::Many, Arity::Many});
}

TEST_CASE("structural productions spell out the chaining skeleton") {
    GrammarSpec g = default_grammar();

    auto has = [&](Nonterminal head, std::vector<Symbol> body) {
        return g.find_production(head, body) != static_cast<std::size_t>(-1);
    };

    CHECK(has(Nonterminal::System, {Symbol::N(Nonterminal::StartSI)}));
    CHECK(has(Nonterminal::StartSI, {Symbol::N(Nonterminal::StartSISO)}));
    CHECK(has(Nonterminal::StartSI,
              {Symbol::N(Nonterminal::StartSISO), Symbol::N(Nonterminal::SI)}));
    CHECK(has(Nonterminal::StartSI, {Symbol::N(Nonterminal::SIMO), Symbol::N(Nonterminal::MI)}));
    CHECK(has(Nonterminal::SI, {Symbol::N(Nonterminal::SISO)}));
    CHECK(has(Nonterminal::SI, {Symbol::N(Nonterminal::SISO), Symbol::N(Nonterminal::SI)}));
    CHECK(has(Nonterminal::SI, {Symbol::N(Nonterminal::SIMO), Symbol::N(Nonterminal::MI)}));
    CHECK(has(Nonterminal::MI, {Symbol::N(Nonterminal::MISO)}));
    CHECK(has(Nonterminal::MI, {Symbol::N(Nonterminal::MISO), Symbol::N(Nonterminal::SI)}));
    CHECK(has(Nonterminal::MI, {Symbol::N(Nonterminal::MIMO), Symbol::N(Nonterminal::MI)}));
}

TEST_CASE("make_grammar rejects a startable terminal with the wrong signature") {
    std::vector<ComponentTerm> terminals = {step_by_step(1), step_by_step(5), majority_voter()};
    CHECK_THROWS_AS(make_grammar(terminals, {step_by_step(5)}), ConfigError);
}

TEST_CASE("make_grammar rejects a startable terminal missing from the terminal list") {
    std::vector<ComponentTerm> terminals = {step_by_step(1)};
    CHECK_THROWS_AS(make_grammar(terminals, {role_based(1)}), ConfigError);
}

TEST_CASE("make_grammar rejects duplicate terminals") {
    std::vector<ComponentTerm> terminals = {step_by_step(1), step_by_step(1)};
    CHECK_THROWS_AS(make_grammar(terminals, {step_by_step(1)}), ConfigError);
}

TEST_CASE("validation flags a terminal nobody produces") {
    GrammarSpec g = default_grammar();
    g.terminals.push_back(step_by_step(3));
    CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("validation flags a terminal filed under the wrong arity class") {
    GrammarSpec g = default_grammar();
    // MajorityVoter consumes many answers; it cannot sit under a
    // single-input class.
    g.productions.push_back({Nonterminal::SISO, {Symbol::T(majority_voter())}});
    CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("validation flags a broken chaining production") {
    GrammarSpec g = default_grammar();
    // SIMO emits many answers but SI expects a single input.
    g.productions.push_back({Nonterminal::StartSI,
                             {Symbol::N(Nonterminal::SIMO), Symbol::N(Nonterminal::SI)}});
    // Duplicated production also trips validation; remove the original first.
    auto original = g.find_production(
        Nonterminal::StartSI, {Symbol::N(Nonterminal::SIMO), Symbol::N(Nonterminal::MI)});
    REQUIRE(original != static_cast<std::size_t>(-1));
    g.productions.erase(g.productions.begin() + static_cast<long>(original));
    CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("grammar text round-trips through serialize and parse") {
    GrammarSpec g = default_grammar();
    std::string doc = serialize(g);
    GrammarSpec back = parse_grammar(doc);

    REQUIRE(back.productions.size() == g.productions.size());
    for (std::size_t i = 0; i < g.productions.size(); ++i)
        CHECK(back.productions[i].text() == g.productions[i].text());
    CHECK(back.terminals == g.terminals);
    CHECK(back.start == g.start);
}

TEST_CASE("parse_grammar keeps the declared terminal order") {
    // Same productions as the default grammar, but terminals declared in a
    // scrambled order. Forced sampling iterates this order, so it must stick.
    GrammarSpec g = default_grammar();
    std::string doc = serialize(g);

    auto pos = doc.find("\nterminals:");
    REQUIRE(pos != std::string::npos);
    ++pos;
    auto eol = doc.find('\n', pos);
    std::string scrambled =
        "terminals: MajorityVoter StepByStepReasoner[cnt=1] RoleBasedReasoner[cnt=1] "
        "SelfCriticIteration[rnds=5] StepByStepReasoner[cnt=5] RoleBasedReasoner[cnt=5] "
        "ConsensusBuilder DebateIteration[rnds=2] MultiSelfCriticIteration[rnds=5]";
    doc = doc.substr(0, pos) + scrambled + doc.substr(eol);

    GrammarSpec back = parse_grammar(doc);
    REQUIRE(back.terminals.size() == 9);
    CHECK(back.terminals[0] == majority_voter());
    CHECK(back.terminals[1] == step_by_step(1));
}

TEST_CASE("parse_grammar reports the offending line number") {
    std::string doc =
        "start: System\n"
        "System -> StartSI\n"
        "StartSI -> Banana\n";
    try {
        parse_grammar(doc);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 3);
        CHECK(std::string(e.what()).find("Banana") != std::string::npos);
    }
}

TEST_CASE("parse_grammar ignores blank lines and comments") {
    GrammarSpec g = default_grammar();
    std::string doc = "# component grammar\n\n" + serialize(g) + "\n# trailing note\n";
    CHECK_NOTHROW(parse_grammar(doc));
}

TEST_CASE("component token parsing accepts full and short names") {
    CHECK(parse_component_token("StepByStepReasoner[cnt=5]") == step_by_step(5));
    CHECK(parse_component_token("StepByStep[5]") == step_by_step(5));
    CHECK(parse_component_token("RoleBased[cnt=1]") == role_based(1));
    CHECK(parse_component_token("SelfCritic[rnds=5]") == self_critic(5));
    CHECK(parse_component_token("Debate[2]") == debate(2));
    CHECK(parse_component_token("MajorityVoter") == majority_voter());
    CHECK(parse_component_token("Consensus") == consensus_builder());
    CHECK(parse_component_token("MultiSelfCritic[rnds=3]") == multi_self_critic(3));
}

TEST_CASE("component token parsing applies defaults") {
    CHECK(parse_component_token("StepByStepReasoner") == step_by_step(1));
    CHECK(parse_component_token("RoleBasedReasoner") == role_based(1));
    CHECK(parse_component_token("SelfCritic") == self_critic(5));
    CHECK(parse_component_token("Debate") == debate(2));
    CHECK(parse_component_token("MultiSelfCritic") == multi_self_critic(5));
}

TEST_CASE("component token parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_component_token("Banana"), ParseError);
    CHECK_THROWS_AS(parse_component_token("StepByStep[cnt=]"), ParseError);
    CHECK_THROWS_AS(parse_component_token("StepByStep[cnt=x]"), ParseError);
    CHECK_THROWS_AS(parse_component_token("StepByStep[rnds=5]"), ParseError);
    CHECK_THROWS_AS(parse_component_token("SelfCritic[cnt=5]"), ParseError);
    CHECK_THROWS_AS(parse_component_token("MajorityVoter[2]"), ParseError);
    CHECK_THROWS_AS(parse_component_token("StepByStep[cnt=0]"), ConfigError);
    CHECK_THROWS_AS(parse_component_token(""), ParseError);
}

TEST_CASE("sequence text round-trips") {
    ComponentSequence seq{role_based(5), debate(2), consensus_builder()};
    CHECK(seq.text() ==
          "RoleBasedReasoner[cnt=5] => DebateIteration[rnds=2] => ConsensusBuilder");
    CHECK(parse_sequence_text(seq.text()) == seq);
}

TEST_CASE("base MAS table lists the four reference systems in order") {
    auto mases = base_mases();
    REQUIRE(mases.size() == 4);

    CHECK(mases[0].name == "CoT");
    CHECK(mases[0].sequence == ComponentSequence{step_by_step(1)});

    CHECK(mases[1].name == "CoT-SC");
    CHECK(mases[1].sequence == ComponentSequence{step_by_step(5), majority_voter()});

    CHECK(mases[2].name == "Self-Refine");
    CHECK(mases[2].sequence == ComponentSequence{step_by_step(1), self_critic(5)});

    CHECK(mases[3].name == "MA-Debate");
    CHECK(mases[3].sequence ==
          ComponentSequence{role_based(5), debate(2), consensus_builder()});

    CHECK_THROWS_AS(base_mas("GoT"), ConfigError);
}

TEST_CASE("production text renders head and body") {
    GrammarSpec g = default_grammar();
    CHECK(g.productions[0].text() == "System -> StartSI");
    // One terminal production, exact form.
    auto idx = g.find_production(Nonterminal::MISO, {Symbol::T(majority_voter())});
    REQUIRE(idx != static_cast<std::size_t>(-1));
    CHECK(g.productions[idx].text() == "MISO -> MajorityVoter");
}
