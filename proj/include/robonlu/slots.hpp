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

#ifndef ROBONLU_SLOTS_HPP_
#define ROBONLU_SLOTS_HPP_

#include <map>
#include <string>
#include <vector>

#include "robonlu/action.hpp"
#include "robonlu/corpus.hpp"
#include "robonlu/embed.hpp"
#include "robonlu/net.hpp"

namespace robonlu {
namespace slots {

enum class IobKind { O, B, I };

struct IobTag {
  IobKind kind = IobKind::O;
  std::string slot_type;  // empty for O

  static IobTag parse(const std::string& text);
  std::string str() const;

  bool operator==(const IobTag&) const = default;
};

// "O" plus B-/I- pairs for each slot type, O first; the per-action variant
// restricts the slot types to one action's allowed set.
std::vector<std::string> tag_label_set(const corpus::TaskSchema& schema);
std::vector<std::string> tag_label_set(const corpus::TaskSchema& schema,
                                       const std::string& action);

struct SlotModel {
  net::SequenceModelConfig config;  // per_step, output_dim = |tag labels|
  net::ModelParams params;
  std::vector<std::string> labels;  // tag strings
  std::string vocab_fingerprint;

  void save(const std::string& path) const;
  static SlotModel load(const std::string& path);
};

// Per-step tagger trained with softmax cross-entropy summed over steps.
// With action_filter set (one slot model per action), only that action's
// records are used and the tag set shrinks to its allowed slots.
SlotModel train_slot_model(const corpus::Dataset& dataset,
                           const corpus::TaskSchema& schema,
                           net::SequenceModelConfig config,
                           const embed::EmbeddingMatrix& embedding,
                           const action::TrainSettings& settings,
                           const std::string& action_filter = "",
                           net::TrainTrace* trace = nullptr);

// One argmax tag per token; ties break to the lowest label index.
std::vector<IobTag> predict_tags(const SlotModel& model,
                                 const embed::EmbeddingMatrix& embedding,
                                 const std::vector<std::string>& tokens);

// B-/I- tags whose slot type is outside the detected action's allowed set
// become O; everything else is untouched.
std::vector<IobTag> post_filter(const std::string& action,
                                const std::vector<IobTag>& tags,
                                const corpus::TaskSchema& schema);

struct SlotSpan {
  std::size_t start = 0;  // token index, inclusive
  std::size_t end = 0;    // exclusive
  std::string text;

  bool operator==(const SlotSpan&) const = default;
};

using SlotFrame = std::map<std::string, std::vector<SlotSpan>>;

// Maximal B-then-I runs become spans. An I without a compatible open span
// is promoted to B (dropping a robot command argument costs more than a
// boundary error); an I of a different type closes the span and opens a
// new one.
SlotFrame decode_frames(const std::vector<std::string>& tokens,
                        const std::vector<IobTag>& tags);

// Inverse of decode_frames for well-formed frames; test helper.
std::vector<IobTag> encode_frames(std::size_t n_tokens,
                                  const SlotFrame& frame);

std::vector<IobTag> parse_tags(const std::vector<std::string>& raw);
std::vector<std::string> tags_to_strings(const std::vector<IobTag>& tags);

// Approach-2 model selection. "Other" bypasses slot filling entirely; the
// caller emits an empty frame without consulting the map.
const SlotModel& select_slot_model(
    const std::map<std::string, SlotModel>& models, const std::string& action,
    const corpus::TaskSchema& schema);

}  // namespace slots
}  // namespace robonlu

#endif  // ROBONLU_SLOTS_HPP_
