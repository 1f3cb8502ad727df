// Copyright 2026 The robonlu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "robonlu/corpus.hpp"
#include "robonlu/error.hpp"
#include "robonlu/splitter.hpp"

using namespace robonlu;
using namespace robonlu::splitter;
using robonlu::corpus::tokenize;

TEST_CASE("pos_tag looks words up with a NOUN fallback") {
  const auto lex = PosLexicon::defaults();
  CHECK(pos_tag(tokenize("go to the kitchen"), lex) ==
        std::vector<Pos>{Pos::VERB, Pos::PREP, Pos::DET, Pos::NOUN});
  CHECK(pos_tag({}, lex).empty());
  CHECK(pos_tag({"flibber"}, lex) == std::vector<Pos>{Pos::NOUN});
}

TEST_CASE("default lexicon covers both schemas and the required entries") {
  const auto lex = PosLexicon::defaults();
  CHECK_NOTHROW(lex.validate_covers(corpus::TaskSchema::gpsr()));
  CHECK_NOTHROW(lex.validate_covers(corpus::TaskSchema::fbm3()));
  CHECK(lex.tag("and") == Pos::CONJ);
  CHECK(lex.tag("then") == Pos::CONJ);
  for (const char* w : {"please", "could", "would", "can", "will"})
    CHECK(lex.contains(w));
}

TEST_CASE("auxiliaries are not principal verbs") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("could you go to the kitchen");
  const auto verbs = find_principal_verbs(tokens, pos_tag(tokens, lex));
  CHECK(verbs == std::vector<std::size_t>{2});  // "go"
}

TEST_CASE("every clause verb is found") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("go to the kitchen and grab the coke");
  const auto verbs = find_principal_verbs(tokens, pos_tag(tokens, lex));
  CHECK(verbs == std::vector<std::size_t>{0, 5});
}

TEST_CASE("no verbs means no principal verbs") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("the kitchen");
  CHECK(find_principal_verbs(tokens, pos_tag(tokens, lex)).empty());
}

TEST_CASE("a verb directly next to an auxiliary is treated as auxiliary") {
  const auto lex = PosLexicon::defaults();
  // "will follow": adjacency marks "follow" as auxiliary-coupled.
  const auto tokens = tokenize("i will follow");
  const auto verbs = find_principal_verbs(tokens, pos_tag(tokens, lex));
  CHECK(verbs.empty());
}

TEST_CASE("split keeps a single command whole") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("go to the kitchen");
  CHECK(split(tokens, lex) == std::vector<PhraseSpan>{{0, 4}});
}

TEST_CASE("split removes the boundary conjunction") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("go to the kitchen and grab the coke");
  const auto spans = split(tokens, lex);
  REQUIRE(spans.size() == 2);
  CHECK(slice(tokens, spans[0]) ==
        std::vector<std::string>{"go", "to", "the", "kitchen"});
  CHECK(slice(tokens, spans[1]) ==
        std::vector<std::string>{"grab", "the", "coke"});
}

TEST_CASE("three clauses, no conjunction inside any span") {
  const auto lex = PosLexicon::defaults();
  const auto tokens =
      tokenize("go to the kitchen then find john and guide him to the exit");
  const auto spans = split(tokens, lex);
  REQUIRE(spans.size() == 3);
  CHECK(slice(tokens, spans[0]) ==
        std::vector<std::string>{"go", "to", "the", "kitchen"});
  CHECK(slice(tokens, spans[1]) == std::vector<std::string>{"find", "john"});
  CHECK(slice(tokens, spans[2]) ==
        std::vector<std::string>{"guide", "him", "to", "the", "exit"});
  for (const auto& span : spans)
    for (const auto& tok : slice(tokens, span))
      CHECK(lex.tag(tok) != Pos::CONJ);
}

TEST_CASE("two-token joiners are removed whole") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("move to the office and then grasp the towel");
  const auto spans = split(tokens, lex);
  REQUIRE(spans.size() == 2);
  CHECK(slice(tokens, spans[0]) ==
        std::vector<std::string>{"move", "to", "the", "office"});
  CHECK(slice(tokens, spans[1]) ==
        std::vector<std::string>{"grasp", "the", "towel"});
}

TEST_CASE("conjunction directly between two verbs splits before the second") {
  const auto lex = PosLexicon::defaults();
  const auto tokens = tokenize("go and grab the coke");
  const auto spans = split(tokens, lex);
  REQUIRE(spans.size() == 2);
  CHECK(slice(tokens, spans[0]) == std::vector<std::string>{"go"});
  CHECK(slice(tokens, spans[1]) ==
        std::vector<std::string>{"grab", "the", "coke"});
}

TEST_CASE("split rejects empty input") {
  const auto lex = PosLexicon::defaults();
  CHECK_THROWS_AS(split({}, lex), ArgumentError);
}

TEST_CASE("spans are ordered, disjoint, and conserve tokens") {
  const auto lex = PosLexicon::defaults();
  const auto schema = corpus::TaskSchema::gpsr();
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const auto ins = corpus::generate_instruction(schema, 1 + i % 3, rng);
    const auto tokens = tokenize(ins.text);
    const auto spans = split(tokens, lex);

    std::vector<bool> covered(tokens.size(), false);
    std::size_t last_end = 0;
    for (const auto& span : spans) {
      REQUIRE(span.start >= last_end);
      REQUIRE(span.start < span.end);
      REQUIRE(span.end <= tokens.size());
      last_end = span.end;
      for (std::size_t k = span.start; k < span.end; ++k) covered[k] = true;
    }
    // Every uncovered token must be a boundary conjunction.
    for (std::size_t k = 0; k < tokens.size(); ++k)
      if (!covered[k]) CHECK(lex.tag(tokens[k]) == Pos::CONJ);
  }
}

TEST_CASE("gold segmentation is recovered on generated instructions") {
  const auto lex = PosLexicon::defaults();
  const auto schema = corpus::TaskSchema::gpsr();
  Rng rng(1234);
  int total = 0, matched = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto ins = corpus::generate_instruction(schema, 1 + i % 3, rng);
    const auto tokens = tokenize(ins.text);
    const auto spans = split(tokens, lex);
    ++total;
    if (spans.size() != ins.gold_commands.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < spans.size(); ++k)
      ok &= slice(tokens, spans[k]) == ins.gold_commands[k].tokens;
    matched += ok;
  }
  INFO("matched " << matched << " of " << total);
  CHECK(matched >= 950);
}

TEST_CASE("lexicon file round trip") {
  const auto lex = PosLexicon::defaults();
  const auto path =
      (std::filesystem::temp_directory_path() / "robonlu_pos.json").string();
  lex.save(path);
  const auto back = PosLexicon::load(path);
  CHECK(back.tag("go") == Pos::VERB);
  CHECK(back.tag("and") == Pos::CONJ);
  CHECK(back.tag("flibber") == Pos::NOUN);
  CHECK_NOTHROW(back.validate_covers(corpus::TaskSchema::gpsr()));
  std::remove(path.c_str());
}
