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

#include "robonlu/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "robonlu/error.hpp"

namespace robonlu {
namespace corpus {

namespace {

using nlohmann::json;

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<std::vector<std::string>> as_templates(
    std::initializer_list<const char*> list) {
  std::vector<std::vector<std::string>> out;
  for (const char* t : list) out.push_back(words(t));
  return out;
}

bool is_placeholder(const std::string& token) {
  return token.size() >= 3 && token.front() == '{' && token.back() == '}';
}

std::string placeholder_slot(const std::string& token) {
  return token.substr(1, token.size() - 2);
}

const std::vector<std::string>& room_values() {
  static const std::vector<std::string> v = {
      "kitchen",       "bathroom",      "bedroom",  "living room",
      "dining room",   "hallway",       "office",   "balcony",
      "kitchen table", "coffee table",  "kitchen counter", "bookshelf"};
  return v;
}

const std::vector<std::string>& source_values() {
  static const std::vector<std::string> v = {
      "kitchen table", "coffee table", "kitchen counter", "bookshelf",
      "fridge",        "cupboard",     "kitchen",         "office",
      "living room",   "dining room"};
  return v;
}

const std::vector<std::string>& location_values() {
  static const std::vector<std::string> v = {
      "kitchen",     "bathroom", "bedroom", "living room",
      "dining room", "hallway",  "office",  "balcony",
      "kitchen counter", "bookshelf"};
  return v;
}

const std::vector<std::string>& object_values() {
  static const std::vector<std::string> v = {
      "coke",      "beer",   "water",     "milk",   "apple",
      "banana",    "orange juice",        "cereal", "crackers",
      "chips",     "sponge", "soap",      "towel",  "book",
      "newspaper", "magazine",            "cup",    "bottle",
      "plate",     "energy drink"};
  return v;
}

const std::vector<std::string>& person_values() {
  static const std::vector<std::string> v = {
      "john",  "mary",  "robert", "patricia", "michael",
      "linda", "james", "susan",  "david",    "sarah"};
  return v;
}

const std::vector<std::string>& what_to_tell_values() {
  static const std::vector<std::string> v = {
      "the time", "a joke",      "your name", "the date",
      "the weather", "a story",  "the news",  "your age"};
  return v;
}

// Out-of-set imperatives. Verbs and argument nouns here are checked (by
// test) to be disjoint from every schema template.
const std::vector<std::vector<std::string>>& other_templates() {
  static const std::vector<std::vector<std::string>> v = as_templates({
      "sing a song",
      "sing me a song",
      "dance with me",
      "cook dinner",
      "cook a meal",
      "open the door",
      "open the window",
      "close the door",
      "close the window",
      "play some music",
      "play a game",
      "clean the floor",
      "wash the dishes",
      "paint a picture",
      "draw a circle",
      "drive the car",
      "make a sandwich",
      "turn on the lights",
      "switch off the tv",
  });
  return v;
}

const std::vector<std::string>& joiner_choices() {
  static const std::vector<std::string> v = {"and", "then", "and then"};
  return v;
}

}  // namespace

TaskSchema TaskSchema::gpsr() {
  TaskSchema s;
  s.name = "gpsr";
  s.slot_lexicon["object"] = object_values();
  s.slot_lexicon["person"] = person_values();
  s.slot_lexicon["source"] = source_values();
  s.slot_lexicon["destination"] = room_values();
  s.slot_lexicon["location"] = location_values();
  s.slot_lexicon["what_to_tell"] = what_to_tell_values();

  s.actions.push_back({"motion",
                       {"destination"},
                       as_templates({
                           "go to the {destination}",
                           "move to the {destination}",
                           "navigate to the {destination}",
                           "please go to the {destination}",
                           "could you go to the {destination}",
                       })});
  s.actions.push_back({"meet",
                       {"person"},
                       as_templates({
                           "meet {person}",
                           "greet {person}",
                           "introduce yourself to {person}",
                           "please greet {person}",
                       })});
  s.actions.push_back({"grasp",
                       {"object", "source"},
                       as_templates({
                           "grab the {object}",
                           "grasp the {object}",
                           "pick up the {object}",
                           "grab the {object} from the {source}",
                           "take the {object} from the {source}",
                       })});
  s.actions.push_back({"place",
                       {"object", "destination"},
                       as_templates({
                           "put the {object} on the {destination}",
                           "place the {object} on the {destination}",
                           "leave the {object} in the {destination}",
                           "put the {object} in the {destination}",
                       })});
  s.actions.push_back({"take",
                       {"object", "destination", "person"},
                       as_templates({
                           "take the {object} to the {destination}",
                           "bring the {object} to {person}",
                           "carry the {object} to the {destination}",
                           "deliver the {object} to {person}",
                           "bring the {object} to the {destination}",
                       })});
  s.actions.push_back({"tell",
                       {"what_to_tell", "person"},
                       as_templates({
                           "tell {person} {what_to_tell}",
                           "say {what_to_tell} to {person}",
                           "tell {what_to_tell} to {person}",
                           "please tell {person} {what_to_tell}",
                       })});
  s.actions.push_back({"answer",
                       {},
                       as_templates({
                           "answer the question",
                           "answer a question",
                           "respond to the question",
                           "please answer the question",
                       })});
  s.actions.push_back({"find",
                       {"object", "location"},
                       as_templates({
                           "find the {object} in the {location}",
                           "locate the {object}",
                           "look for the {object} in the {location}",
                           "search for the {object} in the {location}",
                       })});
  s.actions.push_back({"guide",
                       {"person", "destination"},
                       as_templates({
                           "guide {person} to the {destination}",
                           "lead {person} to the {destination}",
                           "escort {person} to the {destination}",
                           "accompany {person} to the {destination}",
                       })});
  s.actions.push_back({"follow",
                       {"person", "destination"},
                       as_templates({
                           "follow {person}",
                           "follow {person} to the {destination}",
                           "please follow {person}",
                           "could you follow {person}",
                       })});
  return s;
}

TaskSchema TaskSchema::fbm3() {
  TaskSchema s;
  s.name = "fbm3";
  s.slot_lexicon["object"] = object_values();
  s.slot_lexicon["source"] = source_values();
  s.slot_lexicon["destination"] = room_values();
  s.slot_lexicon["beneficiary"] = person_values();
  s.slot_lexicon["location"] = location_values();

  s.actions.push_back({"motion",
                       {"destination"},
                       as_templates({
                           "go to the {destination}",
                           "move to the {destination}",
                           "reach the {destination}",
                           "enter the {destination}",
                       })});
  s.actions.push_back({"searching",
                       {"object", "location"},
                       as_templates({
                           "look for the {object} in the {location}",
                           "search for the {object} in the {location}",
                           "find the {object}",
                           "locate the {object} in the {location}",
                       })});
  s.actions.push_back({"taking",
                       {"object", "source"},
                       as_templates({
                           "take the {object} from the {source}",
                           "grab the {object}",
                           "pick up the {object} from the {source}",
                           "get the {object} from the {source}",
                       })});
  s.actions.push_back({"placing",
                       {"object", "destination"},
                       as_templates({
                           "put the {object} on the {destination}",
                           "place the {object} on the {destination}",
                           "drop the {object} in the {destination}",
                           "set the {object} on the {destination}",
                       })});
  s.actions.push_back({"bringing",
                       {"object", "destination", "beneficiary"},
                       as_templates({
                           "bring the {object} to {beneficiary}",
                           "take the {object} to the {destination}",
                           "carry the {object} to {beneficiary}",
                           "deliver the {object} to the {destination}",
                           "give the {object} to {beneficiary}",
                       })});
  return s;
}

TaskSchema TaskSchema::builtin(const std::string& name) {
  if (name == "gpsr") return gpsr();
  if (name == "fbm3") return fbm3();
  throw SchemaError("unknown builtin schema: " + name);
}

const ActionSpec& TaskSchema::action(const std::string& name) const {
  for (const auto& a : actions)
    if (a.name == name) return a;
  throw SchemaError("schema " + this->name + " has no action '" + name + "'");
}

bool TaskSchema::has_action(const std::string& name) const {
  return std::any_of(actions.begin(), actions.end(),
                     [&](const ActionSpec& a) { return a.name == name; });
}

std::vector<std::string> TaskSchema::action_names() const {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.name);
  return out;
}

std::vector<std::string> TaskSchema::slot_types() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : slot_lexicon) out.push_back(k);
  return out;  // map iteration is already sorted
}

void TaskSchema::validate() const {
  std::set<std::string> seen;
  for (const auto& a : actions) {
    if (!seen.insert(a.name).second)
      throw ValidationError("schema " + name + ": duplicate action " + a.name);
    if (a.templates.size() < 3)
      throw ValidationError("schema " + name + ": action " + a.name +
                            " needs at least 3 templates");
    for (const auto& tmpl : a.templates) {
      for (const auto& tok : tmpl) {
        if (!is_placeholder(tok)) continue;
        const std::string slot = placeholder_slot(tok);
        if (!a.allowed_slots.count(slot))
          throw ValidationError("schema " + name + ": action " + a.name +
                                " template uses slot '" + slot +
                                "' outside its allowed set");
        if (!slot_lexicon.count(slot))
          throw ValidationError("schema " + name + ": slot '" + slot +
                                "' missing from the lexicon");
      }
    }
  }
  static const std::set<std::string> kGpsrActions = {
      "motion", "meet", "grasp", "place",  "take",
      "tell",   "answer", "find", "guide", "follow"};
  static const std::set<std::string> kFbm3Actions = {
      "motion", "searching", "taking", "placing", "bringing"};
  if (name == "gpsr" && seen != kGpsrActions)
    throw ValidationError("gpsr schema must carry exactly the 10 GPSR actions");
  if (name == "fbm3" && seen != kFbm3Actions)
    throw ValidationError("fbm3 schema must carry exactly the 5 FBM3 actions");
}

void TaggedSentence::validate() const {
  if (tokens.size() != tags.size())
    throw ValidationError("tagged sentence: " + std::to_string(tokens.size()) +
                          " tokens vs " + std::to_string(tags.size()) +
                          " tags");
  if (auto err = check_iob(tags)) throw ValidationError(*err);
}

std::string TaggedSentence::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  // Punctuation acts as a separator; apostrophes survive this pass so that
  // clitics can be split below.
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char ch : text) {
    if (std::isalnum(ch))
      cleaned += static_cast<char>(std::tolower(ch));
    else if (ch == '\'')
      cleaned += '\'';
    else
      cleaned += ' ';
  }

  std::vector<std::string> out;
  std::istringstream in(cleaned);
  std::string raw;
  while (in >> raw) {
    std::vector<std::string> fragments;
    auto apos = raw.find('\'');
    if (apos == std::string::npos) {
      fragments.push_back(raw);
    } else if (raw.size() > 3 && raw.compare(raw.size() - 3, 3, "n't") == 0) {
      // "don't" -> "do" + "n't"
      fragments.push_back(raw.substr(0, raw.size() - 3));
      fragments.push_back(raw.substr(raw.size() - 3));
    } else {
      fragments.push_back(raw.substr(0, apos));
      fragments.push_back(raw.substr(apos));
    }
    for (const auto& f : fragments) {
      if (f.empty()) continue;
      bool alpha = std::all_of(f.begin(), f.end(), [](unsigned char c) {
        return std::isalpha(c) != 0;
      });
      if (alpha) out.push_back(f);
    }
  }
  return out;
}

std::optional<std::string> check_iob(const std::vector<std::string>& tags) {
  auto slot_of = [](const std::string& t) { return t.substr(2); };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& t = tags[i];
    if (t == "O") continue;
    bool shaped = t.size() > 2 && (t[0] == 'B' || t[0] == 'I') && t[1] == '-';
    if (!shaped)
      return "tag '" + t + "' at position " + std::to_string(i) +
             " is not O, B-<slot>, or I-<slot>";
    if (t[0] == 'I') {
      bool ok = i > 0 && tags[i - 1].size() > 2 &&
                (tags[i - 1][0] == 'B' || tags[i - 1][0] == 'I') &&
                slot_of(tags[i - 1]) == slot_of(t);
      if (!ok)
        return "tag '" + t + "' at position " + std::to_string(i) +
               " has no preceding B/I of the same slot";
    }
  }
  return std::nullopt;
}

TaggedSentence generate_command(const TaskSchema& schema,
                                const std::string& action, Rng& rng) {
  const ActionSpec* spec = nullptr;
  if (action.empty()) {
    spec = &schema.actions[rng.index(schema.actions.size())];
  } else {
    if (!schema.has_action(action))
      throw SchemaError("generate_command: schema " + schema.name +
                        " has no action '" + action + "'");
    spec = &schema.action(action);
  }

  const auto& tmpl = spec->templates[rng.index(spec->templates.size())];
  TaggedSentence s;
  s.action = spec->name;
  for (const auto& tok : tmpl) {
    if (is_placeholder(tok)) {
      const std::string slot = placeholder_slot(tok);
      const auto& values = schema.slot_lexicon.at(slot);
      const auto value_tokens = words(values[rng.index(values.size())]);
      for (std::size_t i = 0; i < value_tokens.size(); ++i) {
        s.tokens.push_back(value_tokens[i]);
        s.tags.push_back((i == 0 ? "B-" : "I-") + slot);
      }
    } else {
      s.tokens.push_back(tok);
      s.tags.push_back("O");
    }
  }
  return s;
}

Instruction generate_instruction(const TaskSchema& schema,
                                 std::size_t n_commands, Rng& rng) {
  if (n_commands == 0)
    throw ArgumentError("generate_instruction: need at least one command");
  Instruction ins;
  std::vector<std::string> pieces;
  for (std::size_t i = 0; i < n_commands; ++i) {
    ins.gold_commands.push_back(generate_command(schema, "", rng));
    pieces.push_back(ins.gold_commands.back().text());
    if (i + 1 < n_commands) {
      ins.joiners.push_back(rng.pick(joiner_choices()));
      pieces.push_back(ins.joiners.back());
    }
  }
  std::string text;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) text += ' ';
    text += pieces[i];
  }
  ins.text = text;
  return ins;
}

std::vector<TaggedSentence> generate_other_commands(std::size_t count,
                                                    Rng& rng) {
  std::vector<TaggedSentence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& tmpl = other_templates()[rng.index(other_templates().size())];
    TaggedSentence s;
    s.action = kOtherAction;
    s.tokens = tmpl;
    s.tags.assign(tmpl.size(), "O");
    out.push_back(std::move(s));
  }
  return out;
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  for (const auto& r : dataset.records) {
    r.validate();
    json line;
    line["tokens"] = r.tokens;
    line["tags"] = r.tags;
    line["action"] = r.action;
    line["schema"] = dataset.schema_name;
    line["split"] = dataset.split;
    out << line.dump() << '\n';
  }
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Dataset d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    TaggedSentence r;
    try {
      r.tokens = j.at("tokens").get<std::vector<std::string>>();
      r.tags = j.at("tags").get<std::vector<std::string>>();
      r.action = j.at("action").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    try {
      r.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " +
                            e.what());
    }
    if (lineno == 1 || d.records.empty()) {
      if (j.contains("schema")) d.schema_name = j["schema"].get<std::string>();
      if (j.contains("split")) d.split = j["split"].get<std::string>();
    }
    d.records.push_back(std::move(r));
  }
  return d;
}

void validate_dataset(const Dataset& dataset, const TaskSchema& schema) {
  const auto types = schema.slot_types();
  const std::set<std::string> slot_set(types.begin(), types.end());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    r.validate();
    if (r.action != kOtherAction && !schema.has_action(r.action))
      throw ValidationError("record " + std::to_string(i) + ": action '" +
                            r.action + "' not in schema " + schema.name);
    for (const auto& t : r.tags) {
      if (t == "O") continue;
      if (!slot_set.count(t.substr(2)))
        throw ValidationError("record " + std::to_string(i) + ": slot type '" +
                              t.substr(2) + "' not in schema " + schema.name);
    }
  }
}

void write_instructions(const std::vector<Instruction>& instructions,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  for (const auto& ins : instructions) {
    json commands = json::array();
    for (const auto& c : ins.gold_commands) {
      c.validate();
      commands.push_back(json{
          {"tokens", c.tokens}, {"tags", c.tags}, {"action", c.action}});
    }
    json line;
    line["text"] = ins.text;
    line["joiners"] = ins.joiners;
    line["commands"] = commands;
    out << line.dump() << '\n';
  }
}

std::vector<Instruction> read_instructions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<Instruction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Instruction ins;
    try {
      json j = json::parse(line);
      ins.text = j.at("text").get<std::string>();
      ins.joiners = j.at("joiners").get<std::vector<std::string>>();
      for (const auto& jc : j.at("commands")) {
        TaggedSentence c;
        c.tokens = jc.at("tokens").get<std::vector<std::string>>();
        c.tags = jc.at("tags").get<std::vector<std::string>>();
        c.action = jc.at("action").get<std::string>();
        c.validate();
        ins.gold_commands.push_back(std::move(c));
      }
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (ins.gold_commands.empty() ||
        ins.joiners.size() != ins.gold_commands.size() - 1)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": joiner count must be one less than commands");
    out.push_back(std::move(ins));
  }
  return out;
}

void save_schema(const TaskSchema& schema, const std::string& path) {
  json j;
  j["version"] = 1;
  j["name"] = schema.name;
  json actions = json::array();
  for (const auto& a : schema.actions) {
    json ja;
    ja["name"] = a.name;
    ja["slots"] = a.allowed_slots;
    json templates = json::array();
    for (const auto& t : a.templates) {
      std::string joined;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) joined += ' ';
        joined += t[i];
      }
      templates.push_back(joined);
    }
    ja["templates"] = templates;
    actions.push_back(ja);
  }
  j["actions"] = actions;
  j["slot_lexicon"] = schema.slot_lexicon;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

TaskSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  TaskSchema s;
  try {
    s.name = j.at("name").get<std::string>();
    for (const auto& ja : j.at("actions")) {
      ActionSpec a;
      a.name = ja.at("name").get<std::string>();
      for (const auto& slot : ja.at("slots"))
        a.allowed_slots.insert(slot.get<std::string>());
      for (const auto& t : ja.at("templates"))
        a.templates.push_back(words(t.get<std::string>()));
      s.actions.push_back(std::move(a));
    }
    s.slot_lexicon =
        j.at("slot_lexicon")
            .get<std::map<std::string, std::vector<std::string>>>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  s.validate();
  return s;
}

TaskSchema resolve_schema(const std::string& name_or_path) {
  if (name_or_path == "gpsr" || name_or_path == "fbm3")
    return TaskSchema::builtin(name_or_path);
  return load_schema(name_or_path);
}

}  // namespace corpus
}  // namespace robonlu
