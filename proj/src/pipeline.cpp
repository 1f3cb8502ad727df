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

#include "robonlu/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "robonlu/error.hpp"

namespace robonlu {
namespace pipeline {

namespace {

using nlohmann::json;

// Splits a shuffled index range 80/10/10. The shuffle seed is derived from
// the grid seed so the split never depends on anything else that draws
// random numbers.
struct SplitIndices {
  std::vector<std::size_t> train, validation, test;
};

SplitIndices split_80_10_10(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  rng.shuffle(idx);
  SplitIndices s;
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_val = n / 10;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.validation.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  s.test.assign(idx.begin() + n_train + n_val, idx.end());
  return s;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  PipelineConfig c;
  try {
    c.approach = j.at("approach").get<int>();
    c.schema = j.at("schema").get<std::string>();
    c.backend = embed::backend_from_name(j.at("backend").get<std::string>());
    c.embedding_path = j.at("embedding").get<std::string>();
    c.action_model_path = j.at("action_model").get<std::string>();
    if (j.contains("slot_model"))
      c.slot_model_path = j["slot_model"].get<std::string>();
    if (j.contains("slot_models"))
      c.slot_model_paths =
          j["slot_models"].get<std::map<std::string, std::string>>();
    if (j.contains("pos_lexicon"))
      c.pos_lexicon_path = j["pos_lexicon"].get<std::string>();
    const json& svm = j.at("other_svm");
    if (svm.is_string()) {
      c.other_svm = action::load_other_svm(svm.get<std::string>());
    } else {
      c.other_svm.w = svm.at("w").get<double>();
      c.other_svm.b = svm.at("b").get<double>();
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (c.approach != 1 && c.approach != 2)
    throw ConfigError(path + ": approach must be 1 or 2");
  return c;
}

void PipelineConfig::save(const std::string& path) const {
  json j;
  j["version"] = 1;
  j["approach"] = approach;
  j["schema"] = schema;
  j["backend"] = embed::backend_name(backend);
  j["embedding"] = embedding_path;
  j["action_model"] = action_model_path;
  if (!slot_model_path.empty()) j["slot_model"] = slot_model_path;
  if (!slot_model_paths.empty()) j["slot_models"] = slot_model_paths;
  if (!pos_lexicon_path.empty()) j["pos_lexicon"] = pos_lexicon_path;
  j["other_svm"] = json{{"w", other_svm.w}, {"b", other_svm.b}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

void EvalReport::finalize() {
  action_accuracy = action.accuracy();
  slot_token_accuracy = slot_token.accuracy();
  frame_accuracy = frame.accuracy();
}

Pipeline::Pipeline(int approach, corpus::TaskSchema schema,
                   splitter::PosLexicon lexicon,
                   embed::EmbeddingMatrix embedding,
                   action::ActionModel action_model,
                   action::OtherSvm other_svm,
                   std::optional<slots::SlotModel> shared_slot_model,
                   std::map<std::string, slots::SlotModel> per_action_slot_models)
    : approach_(approach),
      schema_(std::move(schema)),
      lexicon_(std::move(lexicon)),
      embedding_(std::move(embedding)),
      action_model_(std::move(action_model)),
      other_svm_(other_svm),
      slot_model_(std::move(shared_slot_model)),
      slot_models_(std::move(per_action_slot_models)) {
  if (approach_ != 1 && approach_ != 2)
    throw ConfigError("pipeline approach must be 1 or 2");
  schema_.validate();
  lexicon_.validate_covers(schema_);

  if (approach_ == 1) {
    if (!slot_model_)
      throw ConfigError("approach 1 needs exactly one slot model");
  } else {
    for (const auto& name : schema_.action_names())
      if (!slot_models_.count(name))
        throw ConfigError("approach 2 is missing a slot model for action '" +
                          name + "'");
  }

  const std::string fp = embedding_.vocab.fingerprint();
  if (action_model_.vocab_fingerprint != fp)
    throw ConfigError(
        "action model was trained against a different vocabulary");
  if (slot_model_ && slot_model_->vocab_fingerprint != fp)
    throw ConfigError("slot model was trained against a different vocabulary");
  for (const auto& [name, m] : slot_models_)
    if (m.vocab_fingerprint != fp)
      throw ConfigError("slot model for '" + name +
                        "' was trained against a different vocabulary");
  if (action_model_.labels != schema_.action_names())
    throw ConfigError("action model labels do not match the schema");
}

Pipeline Pipeline::load(const PipelineConfig& config) {
  corpus::TaskSchema schema = corpus::resolve_schema(config.schema);
  splitter::PosLexicon lexicon =
      config.pos_lexicon_path.empty()
          ? splitter::PosLexicon::defaults()
          : splitter::PosLexicon::load(config.pos_lexicon_path);
  embed::EmbeddingMatrix embedding =
      embed::load_embedding(config.embedding_path);
  embedding.backend = config.backend;
  action::ActionModel action_model =
      action::ActionModel::load(config.action_model_path);

  std::optional<slots::SlotModel> shared;
  std::map<std::string, slots::SlotModel> per_action;
  if (config.approach == 1) {
    if (config.slot_model_path.empty())
      throw ConfigError("approach 1 config needs a slot_model path");
    shared = slots::SlotModel::load(config.slot_model_path);
  } else {
    for (const auto& [name, path] : config.slot_model_paths)
      per_action.emplace(name, slots::SlotModel::load(path));
  }
  return Pipeline(config.approach, std::move(schema), std::move(lexicon),
                  std::move(embedding), std::move(action_model),
                  config.other_svm, std::move(shared), std::move(per_action));
}

CommandFrame Pipeline::understand_phrase(
    const std::vector<std::string>& tokens) const {
  auto [label, scores] = action::predict_action(action_model_, embedding_,
                                                tokens);
  const double max_score = scores[action::argmax_lowest(scores)];

  CommandFrame frame;
  frame.confidence = max_score;
  if (!action::apply_other(other_svm_, max_score)) {
    frame.action = corpus::kOtherAction;
    return frame;  // slot output erased on rejection
  }
  frame.action = label;

  std::vector<slots::IobTag> tags;
  if (approach_ == 1) {
    tags = slots::predict_tags(*slot_model_, embedding_, tokens);
    tags = slots::post_filter(label, tags, schema_);
  } else {
    const auto& model = slots::select_slot_model(slot_models_, label, schema_);
    tags = slots::predict_tags(model, embedding_, tokens);
  }
  frame.slots = slots::decode_frames(tokens, tags);
  return frame;
}

std::vector<CommandFrame> Pipeline::understand(const std::string& text) const {
  const auto tokens = corpus::tokenize(text);
  if (tokens.empty()) return {};
  const auto spans = splitter::split(tokens, lexicon_);
  std::vector<CommandFrame> frames;
  frames.reserve(spans.size());
  for (const auto& span : spans)
    frames.push_back(understand_phrase(splitter::slice(tokens, span)));
  return frames;
}

namespace {

void count_binary(bool gold_positive, bool correct, TaskCounts& counts) {
  if (correct)
    (gold_positive ? counts.tp : counts.tn)++;
  else
    (gold_positive ? counts.fn : counts.fp)++;
}

// Scores one gold command against one predicted frame.
void score_command(const corpus::TaggedSentence& gold,
                   const CommandFrame& predicted, EvalReport& report) {
  const bool gold_in_set = gold.action != corpus::kOtherAction;
  const bool action_correct = predicted.action == gold.action;
  count_binary(gold_in_set, action_correct, report.action);

  const auto predicted_tags =
      slots::encode_frames(gold.tokens.size(), predicted.slots);
  bool all_tags_match = true;
  for (std::size_t i = 0; i < gold.tags.size(); ++i) {
    const bool gold_slot = gold.tags[i] != "O";
    const bool tag_correct = predicted_tags[i].str() == gold.tags[i];
    all_tags_match &= tag_correct;
    count_binary(gold_slot, tag_correct, report.slot_token);
  }
  count_binary(gold_in_set, action_correct && all_tags_match, report.frame);
}

// A gold command the pipeline missed entirely (bad segmentation).
void score_missed_command(const corpus::TaggedSentence& gold,
                          EvalReport& report) {
  const bool gold_in_set = gold.action != corpus::kOtherAction;
  count_binary(gold_in_set, false, report.action);
  for (const auto& tag : gold.tags)
    count_binary(tag != "O", false, report.slot_token);
  count_binary(gold_in_set, false, report.frame);
}

}  // namespace

EvalReport Pipeline::evaluate(const corpus::Dataset& dataset) const {
  if (!dataset.schema_name.empty() && dataset.schema_name != schema_.name)
    throw ValidationError("evaluate: dataset schema '" + dataset.schema_name +
                          "' does not match pipeline schema '" + schema_.name +
                          "'");
  EvalReport report;
  for (const auto& record : dataset.records) {
    const auto frame = understand_phrase(record.tokens);
    if (frame.action == corpus::kOtherAction && !frame.slots.empty())
      throw ValidationError("rejected command produced a non-empty frame");
    score_command(record, frame, report);
  }
  report.finalize();
  return report;
}

EvalReport Pipeline::evaluate(
    const std::vector<corpus::Instruction>& instructions) const {
  EvalReport report;
  for (const auto& ins : instructions) {
    const auto tokens = corpus::tokenize(ins.text);
    const auto spans =
        tokens.empty() ? std::vector<splitter::PhraseSpan>{}
                       : splitter::split(tokens, lexicon_);

    // Segmentation must recover the gold phrases before per-command scores
    // mean anything; otherwise every command in the instruction is a miss.
    bool aligned = spans.size() == ins.gold_commands.size();
    if (aligned) {
      for (std::size_t i = 0; i < spans.size(); ++i)
        if (splitter::slice(tokens, spans[i]) != ins.gold_commands[i].tokens) {
          aligned = false;
          break;
        }
    }
    if (!aligned) {
      for (const auto& gold : ins.gold_commands)
        score_missed_command(gold, report);
      continue;
    }
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto frame = understand_phrase(ins.gold_commands[i].tokens);
      if (frame.action == corpus::kOtherAction && !frame.slots.empty())
        throw ValidationError("rejected command produced a non-empty frame");
      score_command(ins.gold_commands[i], frame, report);
    }
  }
  report.finalize();
  return report;
}

namespace {

struct GridData {
  corpus::Dataset train, validation, test;
  std::vector<corpus::TaggedSentence> svm_others, test_others;
  std::map<embed::Backend, embed::EmbeddingMatrix> embeddings;
};

GridData prepare_grid_data(const GridSpec& spec) {
  GridData data;
  Rng rng(spec.seed);
  std::vector<corpus::TaggedSentence> records;
  records.reserve(spec.dataset_size);
  for (std::size_t i = 0; i < spec.dataset_size; ++i)
    records.push_back(corpus::generate_command(spec.schema, rng));

  auto others = corpus::generate_other_commands(
      std::max<std::size_t>(spec.other_size, 2), rng);

  const auto split = split_80_10_10(records.size(), spec.seed);
  auto take = [&records](const std::vector<std::size_t>& idx) {
    std::vector<corpus::TaggedSentence> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(records[i]);
    return out;
  };
  data.train = {spec.schema.name, "train", take(split.train)};
  data.validation = {spec.schema.name, "validation", take(split.validation)};
  data.test = {spec.schema.name, "test", take(split.test)};

  const std::size_t n_svm = others.size() * 8 / 10;
  data.svm_others.assign(others.begin(), others.begin() + n_svm);
  data.test_others.assign(others.begin() + n_svm, others.end());

  // The embedding corpus covers everything generated, mirroring unsupervised
  // pretraining on a larger corpus than the labeled set.
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(records.size() + others.size());
  for (const auto& r : records) sentences.push_back(r.tokens);
  for (const auto& r : others) sentences.push_back(r.tokens);
  const auto vocab = embed::Vocabulary::build(sentences, 50000);

  for (const auto backend : spec.embeddings) {
    if (data.embeddings.count(backend)) continue;
    switch (backend) {
      case embed::Backend::kOneHot:
        data.embeddings.emplace(backend, embed::one_hot_embedding(vocab));
        break;
      case embed::Backend::kSkipgram: {
        embed::SkipgramConfig cfg;
        cfg.dim = spec.embed_dim;
        cfg.epochs = spec.embed_epochs;
        cfg.seed = spec.seed;
        cfg.subsample_t = spec.skipgram_subsample;
        data.embeddings.emplace(backend,
                                embed::train_skipgram(sentences, vocab, cfg));
        break;
      }
      case embed::Backend::kGlove: {
        embed::GloveConfig cfg;
        cfg.dim = spec.embed_dim;
        cfg.epochs = spec.embed_epochs;
        cfg.seed = spec.seed;
        const auto cooc = embed::build_cooc(sentences, vocab, cfg.window);
        data.embeddings.emplace(backend,
                                embed::train_glove(cooc, vocab, cfg));
        break;
      }
    }
  }
  return data;
}

}  // namespace

std::vector<GridRow> run_experiment_grid(const GridSpec& spec) {
  if (spec.architectures.empty() || spec.embeddings.empty() ||
      spec.approaches.empty())
    throw ArgumentError("run_experiment_grid: empty dimension list");
  for (int a : spec.approaches)
    if (a != 1 && a != 2)
      throw ArgumentError("run_experiment_grid: approach must be 1 or 2");
  spec.schema.validate();

  const GridData data = prepare_grid_data(spec);

  struct Cell {
    std::string arch;
    embed::Backend backend;
    int approach;
  };
  std::vector<Cell> cells;
  for (const auto& arch : spec.architectures)
    for (const auto backend : spec.embeddings)
      for (int approach : spec.approaches)
        cells.push_back({arch, backend, approach});

  std::vector<GridRow> rows(cells.size() * 3);

  // Cells are independent: separate models and RNG states, shared read-only
  // data. Row slots are preassigned so the schedule cannot reorder output.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
    const Cell& cell = cells[ci];
    const std::string backend = embed::backend_name(cell.backend);
    auto fail = [&](const std::string& message) {
      static const char* kTasks[] = {"action", "slot_token", "frame"};
      for (int k = 0; k < 3; ++k) {
        GridRow& row = rows[ci * 3 + k];
        row = {cell.arch, backend, cell.approach, kTasks[k], 0.0, {}, true,
               message};
      }
    };
    try {
      const auto& embedding = data.embeddings.at(cell.backend);
      auto arch = net::parse_architecture(cell.arch);
      action::TrainSettings settings{spec.epochs, spec.lr, spec.seed};

      auto action_model = action::train_action(data.train, spec.schema, arch,
                                               embedding, settings);

      std::optional<slots::SlotModel> shared;
      std::map<std::string, slots::SlotModel> per_action;
      if (cell.approach == 1) {
        shared = slots::train_slot_model(data.train, spec.schema, arch,
                                         embedding, settings);
      } else {
        for (const auto& name : spec.schema.action_names())
          per_action.emplace(name,
                             slots::train_slot_model(data.train, spec.schema,
                                                     arch, embedding, settings,
                                                     name));
      }

      // Threshold training data: held-out in-set slice vs out-of-set
      // commands, both scored by the freshly trained action model.
      std::vector<double> in_scores, other_scores;
      for (const auto& r : data.validation.records) {
        auto [label, scores] =
            action::predict_action(action_model, embedding, r.tokens);
        in_scores.push_back(scores[action::argmax_lowest(scores)]);
      }
      for (const auto& r : data.svm_others) {
        auto [label, scores] =
            action::predict_action(action_model, embedding, r.tokens);
        other_scores.push_back(scores[action::argmax_lowest(scores)]);
      }
      auto svm = action::train_other_svm(in_scores, other_scores);

      Pipeline pipeline(cell.approach, spec.schema,
                        splitter::PosLexicon::defaults(), embedding,
                        std::move(action_model), svm, std::move(shared),
                        std::move(per_action));

      corpus::Dataset test = data.test;
      test.records.insert(test.records.end(), data.test_others.begin(),
                          data.test_others.end());
      const EvalReport report = pipeline.evaluate(test);

      rows[ci * 3 + 0] = {cell.arch,  backend, cell.approach,
                          "action",   report.action_accuracy,
                          report.action, false, ""};
      rows[ci * 3 + 1] = {cell.arch,  backend, cell.approach,
                          "slot_token", report.slot_token_accuracy,
                          report.slot_token, false, ""};
      rows[ci * 3 + 2] = {cell.arch,  backend, cell.approach,
                          "frame",    report.frame_accuracy,
                          report.frame, false, ""};
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return rows;
}

std::string grid_csv(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "# accuracy = (tp+tn)/(tp+tn+fp+fn); action/frame rows count per "
         "command with gold Other as the negative class; slot_token rows "
         "count per token with gold O as the negative class\n";
  out << "architecture,embedding,approach,task,accuracy,tp,tn,fp,fn\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const auto& r : rows) {
    if (r.failed) {
      out << r.architecture << ',' << r.embedding << ',' << r.approach << ','
          << r.task << ",failed,0,0,0,0\n";
      continue;
    }
    out << r.architecture << ',' << r.embedding << ',' << r.approach << ','
        << r.task << ',' << r.accuracy << ',' << r.counts.tp << ','
        << r.counts.tn << ',' << r.counts.fp << ',' << r.counts.fn << '\n';
  }
  return out.str();
}

void write_grid_csv(const std::vector<GridRow>& rows,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << grid_csv(rows);
}

std::string frames_to_json(const std::vector<CommandFrame>& frames) {
  json arr = json::array();
  for (const auto& f : frames) {
    json slots = json::object();
    for (const auto& [slot, spans] : f.slots) {
      json values = json::array();
      for (const auto& span : spans) values.push_back(span.text);
      slots[slot] = values;
    }
    arr.push_back(json{{"action", f.action},
                       {"slots", slots},
                       {"confidence", f.confidence}});
  }
  return arr.dump();
}

}  // namespace pipeline
}  // namespace robonlu
