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

#ifndef ROBONLU_ACTION_HPP_
#define ROBONLU_ACTION_HPP_

#include <string>
#include <vector>

#include "robonlu/corpus.hpp"
#include "robonlu/embed.hpp"
#include "robonlu/net.hpp"

namespace robonlu {
namespace action {

// Raw per-action scores, aligned with the model's label order. No softmax:
// the maximum of these raw values is what the Other detector thresholds,
// which works noticeably better than the softmax probability.
using ConfidenceVector = std::vector<double>;

struct ActionModel {
  net::SequenceModelConfig config;  // last_step, output_dim = |actions|
  net::ModelParams params;
  std::vector<std::string> labels;  // schema order, fixed at train time
  std::string vocab_fingerprint;

  void save(const std::string& path) const;
  static ActionModel load(const std::string& path);
};

struct TrainSettings {
  std::size_t epochs = 30;
  double lr = 0.01;
  std::uint64_t seed = 1;
};

// Trains a last-step classifier over the schema's actions. Records labeled
// "Other" are rejected here; out-of-set detection belongs to the SVM.
ActionModel train_action(const corpus::Dataset& dataset,
                         const corpus::TaskSchema& schema,
                         net::SequenceModelConfig config,
                         const embed::EmbeddingMatrix& embedding,
                         const TrainSettings& settings,
                         net::TrainTrace* trace = nullptr);

// Argmax label plus the raw score vector; ties break to the lowest index.
std::pair<std::string, ConfidenceVector> predict_action(
    const ActionModel& model, const embed::EmbeddingMatrix& embedding,
    const std::vector<std::string>& tokens);

std::size_t argmax_lowest(const std::vector<double>& scores);

// 1-D linear soft-margin SVM over the max raw confidence. Decision rule:
// in-set iff w x + b > 0; a point exactly on the boundary is rejected.
struct OtherSvm {
  double w = 0.0;
  double b = 0.0;

  bool in_set(double max_confidence) const {
    return w * max_confidence + b > 0.0;
  }
};

// Subgradient descent on hinge loss + L2 (lambda 0.01, 1000 epochs, lr 0.1,
// samples visited in the given order: in-set first, then other).
OtherSvm train_other_svm(const std::vector<double>& in_set_scores,
                         const std::vector<double>& other_scores);

inline bool apply_other(const OtherSvm& svm, double max_confidence) {
  return svm.in_set(max_confidence);
}

void save_other_svm(const OtherSvm& svm, const std::string& path);
OtherSvm load_other_svm(const std::string& path);

}  // namespace action
}  // namespace robonlu

#endif  // ROBONLU_ACTION_HPP_
