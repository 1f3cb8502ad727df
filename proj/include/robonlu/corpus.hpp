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

#ifndef ROBONLU_CORPUS_HPP_
#define ROBONLU_CORPUS_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "robonlu/rng.hpp"

namespace robonlu {
namespace corpus {

// One robot action: its label, the slot types its commands may carry, and
// the surface templates the generator draws from. Template tokens of the
// form {slot} are placeholders substituted with lexicon values.
struct ActionSpec {
  std::string name;
  std::set<std::string> allowed_slots;
  std::vector<std::vector<std::string>> templates;

  bool operator==(const ActionSpec&) const = default;
};

struct TaskSchema {
  std::string name;
  std::vector<ActionSpec> actions;
  std::map<std::string, std::vector<std::string>> slot_lexicon;

  static TaskSchema gpsr();
  static TaskSchema fbm3();
  // "gpsr" or "fbm3".
  static TaskSchema builtin(const std::string& name);

  const ActionSpec& action(const std::string& name) const;
  bool has_action(const std::string& name) const;
  std::vector<std::string> action_names() const;
  // Sorted lexicon keys.
  std::vector<std::string> slot_types() const;

  // Checks action-name uniqueness, placeholder/lexicon consistency, the
  // per-action template minimum, and the fixed action sets for the two
  // builtin schema names.
  void validate() const;

  bool operator==(const TaskSchema&) const = default;
};

// Universal training/eval record: tokens, aligned IOB tags, gold action.
struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::string action;

  void validate() const;
  std::string text() const;  // tokens joined with single spaces

  bool operator==(const TaggedSentence&) const = default;
};

struct Instruction {
  std::string text;
  std::vector<TaggedSentence> gold_commands;
  std::vector<std::string> joiners;
};

struct Dataset {
  std::string schema_name;
  std::string split;
  std::vector<TaggedSentence> records;

  bool operator==(const Dataset&) const = default;
};

// Lowercases, strips punctuation, splits clitics on apostrophes, and drops
// any fragment that is not purely alphabetic (which removes digit tokens).
std::vector<std::string> tokenize(const std::string& text);

// Is every character of every tag consistent with "O" / "B-x" / "I-x" and
// every I preceded by a same-type B or I? Returns an explanation for the
// first violation, or nullopt when the sequence is well formed.
std::optional<std::string> check_iob(const std::vector<std::string>& tags);

constexpr const char* kOtherAction = "Other";

// Draw order: action (when not given), template, then one lexicon value per
// placeholder left to right. Multi-word values expand to B-/I- runs.
TaggedSentence generate_command(const TaskSchema& schema,
                                const std::string& action, Rng& rng);
inline TaggedSentence generate_command(const TaskSchema& schema, Rng& rng) {
  return generate_command(schema, "", rng);
}

// Joiners are drawn from {"and", "then", "and then"} between consecutive
// commands; draw order is command, joiner, command, ...
Instruction generate_instruction(const TaskSchema& schema,
                                 std::size_t n_commands, Rng& rng);

// Imperatives built from verb/argument lists disjoint from both builtin
// schemas; all tags "O", action "Other".
std::vector<TaggedSentence> generate_other_commands(std::size_t count,
                                                    Rng& rng);

// JSONL: one {"tokens", "tags", "action", ...} object per line. The writer
// adds "schema" and "split" keys; the reader takes them from the first line
// and ignores unknown keys.
void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

// Dataset-level invariants that need schema context: actions in-schema or
// "Other", tag slot types among the lexicon keys.
void validate_dataset(const Dataset& dataset, const TaskSchema& schema);

// JSONL: {"text", "joiners", "commands": [record...]} per line.
void write_instructions(const std::vector<Instruction>& instructions,
                        const std::string& path);
std::vector<Instruction> read_instructions(const std::string& path);

void save_schema(const TaskSchema& schema, const std::string& path);
TaskSchema load_schema(const std::string& path);
// Builtin name, or a path to a schema JSON file.
TaskSchema resolve_schema(const std::string& name_or_path);

}  // namespace corpus
}  // namespace robonlu

#endif  // ROBONLU_CORPUS_HPP_
