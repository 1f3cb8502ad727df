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

#include "robonlu/splitter.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "robonlu/error.hpp"

namespace robonlu {
namespace splitter {

namespace {

using nlohmann::json;

const std::map<std::string, Pos>& name_table() {
  static const std::map<std::string, Pos> t = {
      {"VERB", Pos::VERB}, {"AUX", Pos::AUX},   {"CONJ", Pos::CONJ},
      {"NOUN", Pos::NOUN}, {"DET", Pos::DET},   {"PREP", Pos::PREP},
      {"PRON", Pos::PRON}, {"ADV", Pos::ADV},   {"ADJ", Pos::ADJ},
      {"OTHER", Pos::OTHER}};
  return t;
}

void add_all(std::map<std::string, Pos>& m,
             std::initializer_list<const char*> ws, Pos tag) {
  for (const char* w : ws) m[w] = tag;
}

}  // namespace

std::string pos_name(Pos tag) {
  for (const auto& [name, t] : name_table())
    if (t == tag) return name;
  return "OTHER";
}

Pos pos_from_name(const std::string& name) {
  auto it = name_table().find(name);
  if (it == name_table().end())
    throw ParseError("unknown POS tag name: " + name);
  return it->second;
}

PosLexicon::PosLexicon(std::map<std::string, Pos> entries)
    : entries_(std::move(entries)) {}

PosLexicon PosLexicon::defaults() {
  std::map<std::string, Pos> m;
  add_all(m,
          {// schema template verbs
           "go", "move", "navigate", "meet", "greet", "introduce", "grab",
           "grasp", "pick", "take", "put", "place", "leave", "bring", "carry",
           "deliver", "tell", "say", "answer", "respond", "find", "locate",
           "look", "search", "guide", "lead", "escort", "accompany", "follow",
           "reach", "enter", "get", "drop", "set", "give",
           // out-of-set command verbs
           "sing", "dance", "cook", "open", "close", "play", "clean", "wash",
           "paint", "draw", "drive", "make", "turn", "switch"},
          Pos::VERB);
  add_all(m, {"could", "would", "can", "will", "shall", "may", "must",
              "should", "do", "does"},
          Pos::AUX);
  add_all(m, {"and", "then"}, Pos::CONJ);
  add_all(m, {"the", "a", "an", "your", "my", "his", "her", "their", "some"},
          Pos::DET);
  add_all(m, {"to", "from", "in", "on", "at", "for", "with", "of", "into",
              "after", "by"},
          Pos::PREP);
  add_all(m, {"you", "me", "him", "it", "them", "us", "i", "he", "she",
              "they", "yourself"},
          Pos::PRON);
  add_all(m, {"please", "now", "up", "down", "there", "here", "off", "away"},
          Pos::ADV);
  return PosLexicon(std::move(m));
}

PosLexicon PosLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::map<std::string, Pos> m;
  try {
    for (const auto& [word, tag] : j.at("entries").items())
      m[word] = pos_from_name(tag.get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return PosLexicon(std::move(m));
}

void PosLexicon::save(const std::string& path) const {
  json entries;
  for (const auto& [word, tag] : entries_) entries[word] = pos_name(tag);
  json j;
  j["version"] = 1;
  j["entries"] = entries;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

Pos PosLexicon::tag(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? Pos::NOUN : it->second;
}

bool PosLexicon::contains(const std::string& word) const {
  return entries_.count(word) != 0;
}

void PosLexicon::validate_covers(const corpus::TaskSchema& schema) const {
  for (const auto& action : schema.actions) {
    for (const auto& tmpl : action.templates) {
      // The head verb of each template must be known; otherwise the split
      // heuristic cannot see the clause.
      for (const auto& tok : tmpl) {
        if (tok.front() == '{') continue;
        if (tag(tok) == Pos::VERB) break;  // found the head verb
        if (!contains(tok))
          throw ValidationError("POS lexicon: template of action '" +
                                action.name + "' starts with unknown word '" +
                                tok + "' before any verb");
      }
    }
  }
}

std::vector<Pos> pos_tag(const std::vector<std::string>& tokens,
                         const PosLexicon& lexicon) {
  std::vector<Pos> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(lexicon.tag(t));
  return tags;
}

std::vector<std::size_t> find_principal_verbs(
    const std::vector<std::string>& tokens, const std::vector<Pos>& pos_tags) {
  if (tokens.size() != pos_tags.size())
    throw ValidationError("find_principal_verbs: tokens and tags differ");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pos_tags.size(); ++i) {
    if (pos_tags[i] != Pos::VERB) continue;
    bool aux_before = i > 0 && pos_tags[i - 1] == Pos::AUX;
    bool aux_after = i + 1 < pos_tags.size() && pos_tags[i + 1] == Pos::AUX;
    if (!aux_before && !aux_after) out.push_back(i);
  }
  return out;
}

std::vector<PhraseSpan> split(const std::vector<std::string>& tokens,
                              const PosLexicon& lexicon) {
  if (tokens.empty()) throw ArgumentError("split: empty token list");
  const auto tags = pos_tag(tokens, lexicon);
  const auto verbs = find_principal_verbs(tokens, tags);

  if (verbs.size() <= 1) return {PhraseSpan{0, tokens.size()}};

  std::vector<PhraseSpan> spans;
  std::size_t start = 0;
  for (std::size_t k = 1; k < verbs.size(); ++k) {
    const std::size_t prev_verb = verbs[k - 1];
    const std::size_t cur_verb = verbs[k];
    // First conjunction run strictly between the two principal verbs.
    std::size_t conj_begin = cur_verb;  // sentinel: none found
    std::size_t conj_end = cur_verb;
    for (std::size_t i = prev_verb + 1; i < cur_verb; ++i) {
      if (tags[i] == Pos::CONJ) {
        conj_begin = i;
        conj_end = i + 1;
        while (conj_end < cur_verb && tags[conj_end] == Pos::CONJ) ++conj_end;
        break;
      }
    }
    spans.push_back({start, conj_begin});
    start = conj_end;
  }
  spans.push_back({start, tokens.size()});
  return spans;
}

std::vector<std::string> slice(const std::vector<std::string>& tokens,
                               const PhraseSpan& span) {
  return {tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
          tokens.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

}  // namespace splitter
}  // namespace robonlu
