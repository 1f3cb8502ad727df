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

#ifndef ROBONLU_SPLITTER_HPP_
#define ROBONLU_SPLITTER_HPP_

#include <map>
#include <string>
#include <vector>

#include "robonlu/corpus.hpp"

namespace robonlu {
namespace splitter {

enum class Pos { VERB, AUX, CONJ, NOUN, DET, PREP, PRON, ADV, ADJ, OTHER };

std::string pos_name(Pos tag);
Pos pos_from_name(const std::string& name);

// Word -> POS map with NOUN fallback for unknown words. The command grammar
// is closed, so a lexicon lookup covers it; there is no statistical tagger
// behind this.
class PosLexicon {
 public:
  PosLexicon() = default;
  explicit PosLexicon(std::map<std::string, Pos> entries);

  // Covers both builtin schemas plus the out-of-set command verbs.
  static PosLexicon defaults();

  static PosLexicon load(const std::string& path);
  void save(const std::string& path) const;

  Pos tag(const std::string& word) const;
  bool contains(const std::string& word) const;

  // Every verb used in any template of the schema must be present as VERB.
  void validate_covers(const corpus::TaskSchema& schema) const;

 private:
  std::map<std::string, Pos> entries_;
};

struct PhraseSpan {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  bool operator==(const PhraseSpan&) const = default;
};

std::vector<Pos> pos_tag(const std::vector<std::string>& tokens,
                         const PosLexicon& lexicon);

// Indices of VERB tokens that head a clause. A verb is auxiliary when it is
// itself AUX-tagged or an AUX-tagged word sits directly next to it.
std::vector<std::size_t> find_principal_verbs(
    const std::vector<std::string>& tokens, const std::vector<Pos>& pos_tags);

// One span per principal verb. The boundary between consecutive clauses is
// the first CONJ run between their verbs (conjunction tokens excluded from
// both sides); with no CONJ the split lands immediately before the second
// verb. Zero principal verbs yields a single span over all tokens.
std::vector<PhraseSpan> split(const std::vector<std::string>& tokens,
                              const PosLexicon& lexicon);

std::vector<std::string> slice(const std::vector<std::string>& tokens,
                               const PhraseSpan& span);

}  // namespace splitter
}  // namespace robonlu

#endif  // ROBONLU_SPLITTER_HPP_
