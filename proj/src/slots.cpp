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

#include "robonlu/slots.hpp"

#include <algorithm>

#include "robonlu/error.hpp"

namespace robonlu {
namespace slots {

IobTag IobTag::parse(const std::string& text) {
  if (text == "O") return IobTag{IobKind::O, ""};
  if (text.size() > 2 && text[1] == '-' && (text[0] == 'B' || text[0] == 'I'))
    return IobTag{text[0] == 'B' ? IobKind::B : IobKind::I, text.substr(2)};
  throw ValidationError("bad IOB tag: '" + text + "'");
}

std::string IobTag::str() const {
  switch (kind) {
    case IobKind::O: return "O";
    case IobKind::B: return "B-" + slot_type;
    case IobKind::I: return "I-" + slot_type;
  }
  return "O";
}

std::vector<std::string> tag_label_set(const corpus::TaskSchema& schema) {
  std::vector<std::string> labels = {"O"};
  for (const auto& slot : schema.slot_types()) {
    labels.push_back("B-" + slot);
    labels.push_back("I-" + slot);
  }
  return labels;
}

std::vector<std::string> tag_label_set(const corpus::TaskSchema& schema,
                                       const std::string& action) {
  const auto& spec = schema.action(action);
  std::vector<std::string> labels = {"O"};
  for (const auto& slot : spec.allowed_slots) {
    labels.push_back("B-" + slot);
    labels.push_back("I-" + slot);
  }
  return labels;
}

void SlotModel::save(const std::string& path) const {
  net::Checkpoint ckpt{config, params, vocab_fingerprint, labels};
  net::save_checkpoint(ckpt, path);
}

SlotModel SlotModel::load(const std::string& path) {
  net::Checkpoint ckpt = net::load_checkpoint(path);
  if (ckpt.config.output_mode != net::OutputMode::kPerStep)
    throw ConfigError(path + ": slot model must be per_step");
  if (ckpt.labels.size() != ckpt.config.output_dim)
    throw ConfigError(path + ": label count does not match output dim");
  SlotModel m;
  m.config = ckpt.config;
  m.params = std::move(ckpt.params);
  m.labels = std::move(ckpt.labels);
  m.vocab_fingerprint = std::move(ckpt.vocab_fingerprint);
  return m;
}

SlotModel train_slot_model(const corpus::Dataset& dataset,
                           const corpus::TaskSchema& schema,
                           net::SequenceModelConfig config,
                           const embed::EmbeddingMatrix& embedding,
                           const action::TrainSettings& settings,
                           const std::string& action_filter,
                           net::TrainTrace* trace) {
  const auto labels = action_filter.empty()
                          ? tag_label_set(schema)
                          : tag_label_set(schema, action_filter);
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

  config.output_mode = net::OutputMode::kPerStep;
  config.input_dim = embedding.dim();
  config.output_dim = labels.size();
  config.seed = settings.seed;

  std::vector<net::TrainSample> samples;
  for (const auto& r : dataset.records) {
    if (!action_filter.empty() && r.action != action_filter) continue;
    if (r.action == corpus::kOtherAction) continue;  // all-O by construction
    r.validate();
    net::TrainSample s;
    s.inputs = embedding.embed_sentence(r.tokens);
    for (const auto& tag : r.tags) {
      auto it = label_index.find(tag);
      if (it == label_index.end())
        throw ValidationError("train_slot_model: tag '" + tag +
                              "' outside the model's tag set");
      s.targets.push_back(it->second);
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty())
    throw TrainingError("train_slot_model: no usable records" +
                        (action_filter.empty()
                             ? std::string()
                             : " for action '" + action_filter + "'"));

  SlotModel model;
  model.config = config;
  model.params = net::init_params(config);
  model.labels = labels;
  model.vocab_fingerprint = embedding.vocab.fingerprint();

  net::TrainOptions opts;
  opts.epochs = settings.epochs;
  opts.lr = settings.lr;
  opts.seed = settings.seed;
  auto t = net::train_model(config, model.params, samples, opts);
  if (trace) *trace = std::move(t);
  return model;
}

std::vector<IobTag> predict_tags(const SlotModel& model,
                                 const embed::EmbeddingMatrix& embedding,
                                 const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw ArgumentError("predict_tags: empty token list");
  if (model.vocab_fingerprint != embedding.vocab.fingerprint())
    throw ConfigError(
        "predict_tags: embedding vocabulary does not match the model");
  auto pass =
      net::forward(model.config, model.params, embedding.embed_sentence(tokens));
  std::vector<IobTag> tags;
  tags.reserve(tokens.size());
  for (const auto& scores : pass.scores)
    tags.push_back(IobTag::parse(model.labels[action::argmax_lowest(scores)]));
  return tags;
}

std::vector<IobTag> post_filter(const std::string& action,
                                const std::vector<IobTag>& tags,
                                const corpus::TaskSchema& schema) {
  if (!schema.has_action(action))
    throw ArgumentError("post_filter: unknown action '" + action + "'");
  const auto& allowed = schema.action(action).allowed_slots;
  std::vector<IobTag> out;
  out.reserve(tags.size());
  for (const auto& t : tags) {
    if (t.kind != IobKind::O && !allowed.count(t.slot_type))
      out.push_back(IobTag{IobKind::O, ""});
    else
      out.push_back(t);
  }
  return out;
}

SlotFrame decode_frames(const std::vector<std::string>& tokens,
                        const std::vector<IobTag>& tags) {
  if (tokens.size() != tags.size())
    throw ValidationError("decode_frames: tokens and tags differ in length");

  SlotFrame frame;
  std::string open_slot;
  std::size_t open_start = 0;

  auto close = [&](std::size_t end) {
    if (open_slot.empty()) return;
    SlotSpan span{open_start, end, ""};
    for (std::size_t i = open_start; i < end; ++i) {
      if (i > open_start) span.text += ' ';
      span.text += tokens[i];
    }
    frame[open_slot].push_back(std::move(span));
    open_slot.clear();
  };

  for (std::size_t i = 0; i < tags.size(); ++i) {
    const IobTag& t = tags[i];
    if (t.kind == IobKind::O) {
      close(i);
    } else if (t.kind == IobKind::B) {
      close(i);
      open_slot = t.slot_type;
      open_start = i;
    } else {  // I: continue, repair to B, or switch type
      if (open_slot != t.slot_type) {
        close(i);
        open_slot = t.slot_type;
        open_start = i;
      }
    }
  }
  close(tags.size());
  return frame;
}

std::vector<IobTag> encode_frames(std::size_t n_tokens,
                                  const SlotFrame& frame) {
  std::vector<IobTag> tags(n_tokens, IobTag{IobKind::O, ""});
  for (const auto& [slot, spans] : frame) {
    for (const auto& span : spans) {
      if (span.end > n_tokens || span.start >= span.end)
        throw ValidationError("encode_frames: span out of range");
      for (std::size_t i = span.start; i < span.end; ++i) {
        if (tags[i].kind != IobKind::O)
          throw ValidationError("encode_frames: overlapping spans");
        tags[i] = IobTag{i == span.start ? IobKind::B : IobKind::I, slot};
      }
    }
  }
  return tags;
}

std::vector<IobTag> parse_tags(const std::vector<std::string>& raw) {
  std::vector<IobTag> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(IobTag::parse(r));
  return out;
}

std::vector<std::string> tags_to_strings(const std::vector<IobTag>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(t.str());
  return out;
}

const SlotModel& select_slot_model(
    const std::map<std::string, SlotModel>& models, const std::string& action,
    const corpus::TaskSchema& schema) {
  if (!schema.has_action(action))
    throw ArgumentError("select_slot_model: unknown action '" + action + "'");
  auto it = models.find(action);
  if (it == models.end())
    throw ConfigError("select_slot_model: no slot model for action '" +
                      action + "'");
  return it->second;
}

}  // namespace slots
}  // namespace robonlu
