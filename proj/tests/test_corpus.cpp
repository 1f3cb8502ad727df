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
#include <fstream>
#include <set>

#include "robonlu/corpus.hpp"
#include "robonlu/error.hpp"

using namespace robonlu;
using namespace robonlu::corpus;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("robonlu_corpus_" + name))
      .string();
}

struct FileGuard {
  std::string path;
  explicit FileGuard(std::string p) : path(std::move(p)) {}
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
  CHECK(tokenize("Go to the Kitchen, please!") ==
        std::vector<std::string>{"go", "to", "the", "kitchen", "please"});
}

TEST_CASE("tokenize on empty input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \t ,,, !!").empty());
}

TEST_CASE("tokenize drops digit tokens") {
  CHECK(tokenize("bring 2 cokes") ==
        std::vector<std::string>{"bring", "cokes"});
  CHECK(tokenize("room 42") == std::vector<std::string>{"room"});
  CHECK(tokenize("2nd floor") == std::vector<std::string>{"floor"});
}

TEST_CASE("tokenize splits clitics at apostrophes") {
  CHECK(tokenize("don't go") == std::vector<std::string>{"do", "go"});
  CHECK(tokenize("the robot's arm") ==
        std::vector<std::string>{"the", "robot", "arm"});
  CHECK(tokenize("I'm here") == std::vector<std::string>{"i", "here"});
}

TEST_CASE("tokenize is idempotent on its own output") {
  const std::vector<std::string> texts = {
      "Go to the Kitchen, please!", "bring 2 cokes to John's room",
      "don't sing; DANCE with me!", "find the energy drink"};
  for (const auto& text : texts) {
    auto once = tokenize(text);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize(joined) == once);
  }
}

TEST_CASE("builtin schemas satisfy their invariants") {
  const auto gpsr = TaskSchema::gpsr();
  CHECK_NOTHROW(gpsr.validate());
  CHECK(gpsr.actions.size() == 10);
  const auto fbm3 = TaskSchema::fbm3();
  CHECK_NOTHROW(fbm3.validate());
  CHECK(fbm3.actions.size() == 5);

  // Action names are the published sets.
  const auto gpsr_list = gpsr.action_names();
  const std::set<std::string> gpsr_names(gpsr_list.begin(), gpsr_list.end());
  CHECK(gpsr_names == std::set<std::string>{"motion", "meet", "grasp", "place",
                                            "take", "tell", "answer", "find",
                                            "guide", "follow"});
  const auto fbm3_list = fbm3.action_names();
  const std::set<std::string> fbm3_names(fbm3_list.begin(), fbm3_list.end());
  CHECK(fbm3_names == std::set<std::string>{"motion", "searching", "taking",
                                            "placing", "bringing"});

  for (const auto& a : gpsr.actions) CHECK(a.templates.size() >= 3);
  for (const auto& a : fbm3.actions) CHECK(a.templates.size() >= 3);
}

TEST_CASE("schema validation rejects broken schemas") {
  auto s = TaskSchema::gpsr();
  s.actions.push_back(s.actions.front());
  CHECK_THROWS_AS(s.validate(), ValidationError);  // duplicate action

  auto s2 = TaskSchema::gpsr();
  s2.slot_lexicon.erase("destination");
  CHECK_THROWS_AS(s2.validate(), ValidationError);  // orphan placeholder

  auto s3 = TaskSchema::gpsr();
  s3.actions.pop_back();
  CHECK_THROWS_AS(s3.validate(), ValidationError);  // not the 10 actions
}

TEST_CASE("generate_command for gpsr motion at seed 7") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(7);
  const auto s = generate_command(schema, "motion", rng);
  CHECK(s.tokens == std::vector<std::string>{"go", "to", "the", "office"});
  CHECK(s.tags == std::vector<std::string>{"O", "O", "O", "B-destination"});
  CHECK(s.action == "motion");
}

TEST_CASE("generate_command for fbm3 bringing at seed 3 carries an object") {
  const auto schema = TaskSchema::fbm3();
  Rng rng(3);
  const auto s = generate_command(schema, "bringing", rng);
  CHECK(s.tokens ==
        std::vector<std::string>{"carry", "the", "cereal", "to", "linda"});
  CHECK(s.tags == std::vector<std::string>{"O", "O", "B-object", "O",
                                           "B-beneficiary"});
  CHECK(s.action == "bringing");
}

TEST_CASE("generate_command rejects unknown actions") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(1);
  CHECK_THROWS_AS(generate_command(schema, "fly", rng), SchemaError);
}

TEST_CASE("generated records satisfy every invariant over many seeds") {
  const auto gpsr = TaskSchema::gpsr();
  const auto fbm3 = TaskSchema::fbm3();
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto* schema = (seed % 2 == 0) ? &gpsr : &fbm3;
    Rng rng(seed);
    const auto s = generate_command(*schema, rng);
    REQUIRE_NOTHROW(s.validate());
    REQUIRE(schema->has_action(s.action));
    const auto& allowed = schema->action(s.action).allowed_slots;
    for (const auto& tag : s.tags) {
      if (tag == "O") continue;
      REQUIRE(allowed.count(tag.substr(2)) == 1);
    }
  }
}

TEST_CASE("generator determinism: identical seeds, identical records") {
  const auto schema = TaskSchema::gpsr();
  for (std::uint64_t seed : {0ull, 17ull, 123456789ull}) {
    Rng a(seed), b(seed);
    CHECK(generate_command(schema, a) == generate_command(schema, b));
  }
}

TEST_CASE("tell commands only use tell's slots") {
  const auto schema = TaskSchema::gpsr();
  const auto& allowed = schema.action("tell").allowed_slots;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto s = generate_command(schema, "tell", rng);
    for (const auto& tag : s.tags)
      if (tag != "O") CHECK(allowed.count(tag.substr(2)) == 1);
  }
}

TEST_CASE("generate_instruction with one command has no joiners") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(9);
  const auto ins = generate_instruction(schema, 1, rng);
  CHECK(ins.joiners.empty());
  CHECK(ins.gold_commands.size() == 1);
  CHECK(ins.text == ins.gold_commands[0].text());
}

TEST_CASE("generate_instruction at seed 1 with two commands") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(1);
  const auto ins = generate_instruction(schema, 2, rng);
  CHECK(ins.text == "escort john to the office and follow linda");
  CHECK(ins.joiners == std::vector<std::string>{"and"});
  REQUIRE(ins.gold_commands.size() == 2);
  CHECK(ins.gold_commands[0].action == "guide");
  CHECK(ins.gold_commands[1].action == "follow");
}

TEST_CASE("instruction text re-tokenizes to commands interleaved with joiners") {
  const auto schema = TaskSchema::fbm3();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const auto ins = generate_instruction(schema, 1 + seed % 3, rng);
    CHECK(ins.joiners.size() == ins.gold_commands.size() - 1);
    std::vector<std::string> expect;
    for (std::size_t i = 0; i < ins.gold_commands.size(); ++i) {
      if (i) {
        for (const auto& w : tokenize(ins.joiners[i - 1]))
          expect.push_back(w);
      }
      for (const auto& t : ins.gold_commands[i].tokens) expect.push_back(t);
    }
    CHECK(tokenize(ins.text) == expect);
  }
}

TEST_CASE("generate_instruction rejects zero commands") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(1);
  CHECK_THROWS_AS(generate_instruction(schema, 0, rng), ArgumentError);
}

TEST_CASE("out-of-set commands at seed 2") {
  Rng rng(2);
  const auto cmds = generate_other_commands(1, rng);
  REQUIRE(cmds.size() == 1);
  CHECK(cmds[0].tokens == std::vector<std::string>{"draw", "a", "circle"});
  CHECK(cmds[0].action == kOtherAction);
}

TEST_CASE("out-of-set commands are all-O and disjoint from the schemas") {
  std::set<std::string> schema_words;
  const auto gpsr = TaskSchema::gpsr();
  const auto fbm3 = TaskSchema::fbm3();
  auto collect = [&schema_words](const TaskSchema& s) {
    for (const auto& a : s.actions)
      for (const auto& tmpl : a.templates)
        for (const auto& tok : tmpl)
          if (tok.front() != '{') schema_words.insert(tok);
    for (const auto& [slot, values] : s.slot_lexicon)
      for (const auto& v : values)
        for (const auto& tok : tokenize(v)) schema_words.insert(tok);
  };
  collect(gpsr);
  collect(fbm3);

  Rng rng(77);
  for (const auto& cmd : generate_other_commands(500, rng)) {
    CHECK(cmd.action == kOtherAction);
    for (const auto& tag : cmd.tags) CHECK(tag == "O");
    // The verb (first token) and the argument noun (last token) never occur
    // anywhere in either schema.
    CHECK(schema_words.count(cmd.tokens.front()) == 0);
    CHECK(schema_words.count(cmd.tokens.back()) == 0);
  }
}

TEST_CASE("dataset round trip is the identity") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(13);
  Dataset d;
  d.schema_name = "gpsr";
  d.split = "train";
  for (int i = 0; i < 100; ++i)
    d.records.push_back(generate_command(schema, rng));

  FileGuard file(temp_path("roundtrip.jsonl"));
  write_dataset(d, file.path);
  const auto back = read_dataset(file.path);
  CHECK(back == d);
}

TEST_CASE("read_dataset rejects token/tag length mismatch") {
  FileGuard file(temp_path("badlen.jsonl"));
  std::ofstream out(file.path);
  out << R"({"tokens":["go","home"],"tags":["O"],"action":"motion"})" << '\n';
  out.close();
  CHECK_THROWS_AS(read_dataset(file.path), ValidationError);
}

TEST_CASE("read_dataset rejects an I tag with no opener") {
  FileGuard file(temp_path("badiob.jsonl"));
  std::ofstream out(file.path);
  out << R"({"tokens":["kitchen"],"tags":["I-destination"],"action":"motion"})"
      << '\n';
  out.close();
  CHECK_THROWS_AS(read_dataset(file.path), ValidationError);
}

TEST_CASE("read_dataset names the broken line") {
  FileGuard file(temp_path("badjson.jsonl"));
  std::ofstream out(file.path);
  out << R"({"tokens":["go"],"tags":["O"],"action":"motion"})" << '\n';
  out << "this is not json\n";
  out.close();
  try {
    read_dataset(file.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("read_dataset ignores unknown keys") {
  FileGuard file(temp_path("extrakeys.jsonl"));
  std::ofstream out(file.path);
  out << R"({"tokens":["go"],"tags":["O"],"action":"motion","note":"hi"})"
      << '\n';
  out.close();
  const auto d = read_dataset(file.path);
  REQUIRE(d.records.size() == 1);
  CHECK(d.records[0].action == "motion");
}

TEST_CASE("validate_dataset flags out-of-schema content") {
  const auto schema = TaskSchema::gpsr();
  Dataset d;
  d.schema_name = "gpsr";
  d.records.push_back({{"warp"}, {"O"}, "teleport"});
  CHECK_THROWS_AS(validate_dataset(d, schema), ValidationError);

  Dataset d2;
  d2.records.push_back({{"x"}, {"B-wormhole"}, "motion"});
  CHECK_THROWS_AS(validate_dataset(d2, schema), ValidationError);

  Dataset d3;
  d3.records.push_back({{"sing"}, {"O"}, kOtherAction});
  CHECK_NOTHROW(validate_dataset(d3, schema));
}

TEST_CASE("IOB checker accepts well-formed chains only") {
  CHECK(!check_iob({"O", "B-object", "I-object", "O"}));
  CHECK(check_iob({"I-object"}).has_value());
  CHECK(check_iob({"B-object", "I-person"}).has_value());
  CHECK(check_iob({"B-object", "X-object"}).has_value());
  CHECK(!check_iob({}));
}

TEST_CASE("instructions round trip through their file format") {
  const auto schema = TaskSchema::gpsr();
  Rng rng(21);
  std::vector<Instruction> ins;
  for (int i = 0; i < 25; ++i)
    ins.push_back(generate_instruction(schema, 1 + i % 3, rng));

  FileGuard file(temp_path("instructions.jsonl"));
  write_instructions(ins, file.path);
  const auto back = read_instructions(file.path);
  REQUIRE(back.size() == ins.size());
  for (std::size_t i = 0; i < ins.size(); ++i) {
    CHECK(back[i].text == ins[i].text);
    CHECK(back[i].joiners == ins[i].joiners);
    CHECK(back[i].gold_commands == ins[i].gold_commands);
  }
}

TEST_CASE("schema JSON round trip") {
  const auto schema = TaskSchema::fbm3();
  FileGuard file(temp_path("schema.json"));
  save_schema(schema, file.path);
  const auto back = load_schema(file.path);
  CHECK(back == schema);
}

TEST_CASE("resolve_schema accepts builtin names and paths") {
  CHECK(resolve_schema("gpsr").name == "gpsr");
  CHECK(resolve_schema("fbm3").name == "fbm3");
  CHECK_THROWS_AS(resolve_schema("nope"), Error);
}
