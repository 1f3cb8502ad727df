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

#ifndef ROBONLU_PIPELINE_HPP_
#define ROBONLU_PIPELINE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robonlu/action.hpp"
#include "robonlu/corpus.hpp"
#include "robonlu/embed.hpp"
#include "robonlu/slots.hpp"
#include "robonlu/splitter.hpp"

namespace robonlu {
namespace pipeline {

struct PipelineConfig {
  int approach = 1;
  std::string schema = "gpsr";  // builtin name or schema file path
  embed::Backend backend = embed::Backend::kGlove;
  std::string embedding_path;
  std::string action_model_path;
  std::string slot_model_path;                          // approach 1
  std::map<std::string, std::string> slot_model_paths;  // approach 2
  action::OtherSvm other_svm;
  std::string pos_lexicon_path;  // empty -> builtin defaults

  static PipelineConfig load(const std::string& path);
  void save(const std::string& path) const;
};

struct CommandFrame {
  std::string action;       // schema action or "Other"
  slots::SlotFrame slots;   // empty whenever action == "Other"
  double confidence = 0.0;  // max raw score, not a probability
};

struct TaskCounts {
  long long tp = 0, tn = 0, fp = 0, fn = 0;

  long long total() const { return tp + tn + fp + fn; }
  double accuracy() const {
    return total() == 0
               ? 0.0
               : static_cast<double>(tp + tn) / static_cast<double>(total());
  }
  TaskCounts& operator+=(const TaskCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

// accuracy = (TP + TN) / (TP + TN + FP + FN) per task. Action and frame
// counts are per command with gold "Other" as the negative class; slot
// counts are per token with gold "O" as the negative class.
struct EvalReport {
  TaskCounts action, slot_token, frame;
  double action_accuracy = 0.0;
  double slot_token_accuracy = 0.0;
  double frame_accuracy = 0.0;

  void finalize();
};

class Pipeline {
 public:
  Pipeline(int approach, corpus::TaskSchema schema,
           splitter::PosLexicon lexicon, embed::EmbeddingMatrix embedding,
           action::ActionModel action_model, action::OtherSvm other_svm,
           std::optional<slots::SlotModel> shared_slot_model,
           std::map<std::string, slots::SlotModel> per_action_slot_models);

  static Pipeline load(const PipelineConfig& config);

  // tokenize -> split -> per phrase: action scores, Other gate, slot tags
  // (post-filtered under approach 1), frames in phrase order.
  std::vector<CommandFrame> understand(const std::string& text) const;
  CommandFrame understand_phrase(const std::vector<std::string>& tokens) const;

  EvalReport evaluate(const corpus::Dataset& dataset) const;
  EvalReport evaluate(const std::vector<corpus::Instruction>& instructions) const;

  const corpus::TaskSchema& schema() const { return schema_; }
  const embed::EmbeddingMatrix& embedding() const { return embedding_; }
  int approach() const { return approach_; }

 private:
  int approach_;
  corpus::TaskSchema schema_;
  splitter::PosLexicon lexicon_;
  embed::EmbeddingMatrix embedding_;
  action::ActionModel action_model_;
  action::OtherSvm other_svm_;
  std::optional<slots::SlotModel> slot_model_;
  std::map<std::string, slots::SlotModel> slot_models_;
};

struct GridSpec {
  corpus::TaskSchema schema;
  std::vector<std::string> architectures;       // e.g. "lstm-1x100"
  std::vector<embed::Backend> embeddings;
  std::vector<int> approaches;                  // subset of {1, 2}
  std::uint64_t seed = 1;

  std::size_t dataset_size = 1000;   // split 80/10/10
  std::size_t other_size = 100;      // out-of-set commands for the SVM
  std::size_t epochs = 15;
  double lr = 0.01;
  std::size_t embed_dim = 50;
  std::size_t embed_epochs = 20;
  // The corpus here is thousands of tokens, not billions; with the paper's
  // 1e-5 nearly every token would be subsampled away.
  double skipgram_subsample = 0.05;
};

struct GridRow {
  std::string architecture;
  std::string embedding;
  int approach = 1;
  std::string task;  // action | slot_token | frame
  double accuracy = 0.0;
  TaskCounts counts;
  bool failed = false;
  std::string error;
};

// Every architecture x embedding x approach combination, trained and scored
// on the same fixed-seed split. A failed cell is recorded and the grid
// moves on. Cells run in parallel when OpenMP is available; results do not
// depend on the schedule.
std::vector<GridRow> run_experiment_grid(const GridSpec& spec);

void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path);
std::string grid_csv(const std::vector<GridRow>& rows);

std::string frames_to_json(const std::vector<CommandFrame>& frames);

}  // namespace pipeline
}  // namespace robonlu

#endif  // ROBONLU_PIPELINE_HPP_
