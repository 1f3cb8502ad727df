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

#include "robonlu/action.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "robonlu/error.hpp"

namespace robonlu {
namespace action {

using nlohmann::json;

void ActionModel::save(const std::string& path) const {
  net::Checkpoint ckpt{config, params, vocab_fingerprint, labels};
  net::save_checkpoint(ckpt, path);
}

ActionModel ActionModel::load(const std::string& path) {
  net::Checkpoint ckpt = net::load_checkpoint(path);
  if (ckpt.config.output_mode != net::OutputMode::kLastStep)
    throw ConfigError(path + ": action model must be last_step");
  if (ckpt.labels.size() != ckpt.config.output_dim)
    throw ConfigError(path + ": label count does not match output dim");
  ActionModel m;
  m.config = ckpt.config;
  m.params = std::move(ckpt.params);
  m.labels = std::move(ckpt.labels);
  m.vocab_fingerprint = std::move(ckpt.vocab_fingerprint);
  return m;
}

ActionModel train_action(const corpus::Dataset& dataset,
                         const corpus::TaskSchema& schema,
                         net::SequenceModelConfig config,
                         const embed::EmbeddingMatrix& embedding,
                         const TrainSettings& settings,
                         net::TrainTrace* trace) {
  if (dataset.records.empty())
    throw TrainingError("train_action: empty dataset");

  const auto labels = schema.action_names();
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

  config.output_mode = net::OutputMode::kLastStep;
  config.input_dim = embedding.dim();
  config.output_dim = labels.size();
  config.seed = settings.seed;

  std::vector<net::TrainSample> samples;
  samples.reserve(dataset.records.size());
  for (const auto& r : dataset.records) {
    if (r.action == corpus::kOtherAction)
      throw ValidationError(
          "train_action: 'Other' records do not belong in the action "
          "training set");
    auto it = label_index.find(r.action);
    if (it == label_index.end())
      throw ValidationError("train_action: action '" + r.action +
                            "' not in schema " + schema.name);
    if (r.tokens.empty())
      throw ValidationError("train_action: record with no tokens");
    samples.push_back({embedding.embed_sentence(r.tokens), {it->second}});
  }

  ActionModel model;
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

std::size_t argmax_lowest(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

std::pair<std::string, ConfidenceVector> predict_action(
    const ActionModel& model, const embed::EmbeddingMatrix& embedding,
    const std::vector<std::string>& tokens) {
  if (tokens.empty())
    throw ArgumentError("predict_action: empty token list");
  if (model.vocab_fingerprint != embedding.vocab.fingerprint())
    throw ConfigError(
        "predict_action: embedding vocabulary does not match the model");
  auto pass =
      net::forward(model.config, model.params, embedding.embed_sentence(tokens));
  ConfidenceVector scores = pass.scores.front();
  return {model.labels[argmax_lowest(scores)], scores};
}

OtherSvm train_other_svm(const std::vector<double>& in_set_scores,
                         const std::vector<double>& other_scores) {
  if (in_set_scores.empty() || other_scores.empty())
    throw ArgumentError("train_other_svm: both score lists must be non-empty");

  std::vector<std::pair<double, double>> data;  // (x, y)
  data.reserve(in_set_scores.size() + other_scores.size());
  for (double x : in_set_scores) data.emplace_back(x, 1.0);
  for (double x : other_scores) data.emplace_back(x, -1.0);

  const double lambda = 0.01;
  const double lr = 0.1;
  const std::size_t epochs = 1000;

  // Start from the sign convention that larger confidences mean in-set.
  double w = 1.0, b = 0.0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& [x, y] : data) {
      const double margin = y * (w * x + b);
      double gw = lambda * w;
      double gb = 0.0;
      if (margin < 1.0) {
        gw -= y * x;
        gb -= y;
      }
      w -= lr * gw;
      b -= lr * gb;
    }
  }
  if (w == 0.0) w = 1e-12;  // keep the decision rule well defined
  return OtherSvm{w, b};
}

void save_other_svm(const OtherSvm& svm, const std::string& path) {
  json j{{"w", svm.w}, {"b", svm.b}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump() << '\n';
}

OtherSvm load_other_svm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return OtherSvm{j.at("w").get<double>(), j.at("b").get<double>()};
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace action
}  // namespace robonlu
